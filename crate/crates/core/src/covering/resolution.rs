//! The T-resolution: covering types up to the density of `F^e`, ordered by
//! density, with their threshold exponents.

use alloc::vec::Vec;

use super::{t_density, CoveringError, CoveringSearch, CoveringType};
use crate::density::{base_exponent, is_two_balanced, threshold_exponent};
use crate::graph::{homomorphism_exists, Graph};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ResolutionOptions {
    /// Evaluate the definition even when H lies in a blow-up of T. Singleton
    /// types are still left out.
    pub allow_blow_up: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub types: Vec<CoveringType>,
    pub densities: Vec<Rational>,
    pub threshold_exponents: Vec<Rational>,
    pub base_exponent: Rational,
    /// Index of the `F^e` type in `types`.
    pub fe_index: usize,
}

impl Resolution {
    pub fn fe_type(&self) -> &CoveringType {
        &self.types[self.fe_index]
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

/// All non-singleton covering types with `m_T(F) <= m_T(F^e)`, sorted by
/// density and then by canonical label.
pub fn t_resolution(t: &Graph, h: &Graph, options: ResolutionOptions) -> Result<Resolution, CoveringError> {
    resolution_from_types(t, resolution_search(t, h, options)?.run())
}

/// The prepared, bounded search behind [`t_resolution`], for callers that
/// split the enumeration across threads. Checks the same preconditions.
pub fn resolution_search(t: &Graph, h: &Graph, options: ResolutionOptions) -> Result<CoveringSearch, CoveringError> {
    if !is_two_balanced(t)? {
        return Err(CoveringError::NotTwoBalanced);
    }
    if !options.allow_blow_up && homomorphism_exists(h, t) {
        return Err(CoveringError::TargetInBlowUp);
    }
    let search = CoveringSearch::new(t, h)?;
    let fe = t_density(search.special())?.value.finite().ok_or(CoveringError::BadPattern)?;
    Ok(search.with_bound(fe))
}

/// Assembles a resolution from the types a [`resolution_search`] produced.
pub fn resolution_from_types(t: &Graph, types: Vec<CoveringType>) -> Result<Resolution, CoveringError> {
    let mut entries: Vec<(Rational, CoveringType)> = types
        .into_iter()
        .filter(|ty| !ty.is_singleton())
        .filter_map(|ty| ty.density().and_then(|d| d.finite()).map(|d| (d, ty)))
        .collect();
    entries.sort_by(|(a, x), (b, y)| a.cmp(b).then_with(|| x.canonical.cmp(&y.canonical)));
    let fe_index = entries.iter().position(|(_, ty)| ty.special).ok_or(CoveringError::BadPattern)?;
    let densities: Vec<Rational> = entries.iter().map(|(d, _)| *d).collect();
    let threshold_exponents = densities.iter().map(|&d| threshold_exponent(d)).collect::<Result<_, _>>()?;
    Ok(Resolution {
        types: entries.into_iter().map(|(_, ty)| ty).collect(),
        densities,
        threshold_exponents,
        base_exponent: base_exponent(t)?,
        fe_index,
    })
}
