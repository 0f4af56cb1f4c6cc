//! Seeded random instances of distinct points.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cemu::{Point, PointSet};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("need at least one variable")]
    NoVariables,
    #[error("empty coordinate range {lo}..={hi}")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("only {available} distinct points exist, {requested} requested")]
    TooFewPoints { available: u128, requested: usize },
}

/// Coordinates drawn uniformly from `lo..=hi`; duplicates (after reduction
/// into `field`) are redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub nvars: usize,
    pub points: usize,
    pub lo: i64,
    pub hi: i64,
    pub seed: u64,
}

fn distinct_values(field: Field, lo: i64, hi: i64) -> u128 {
    let width = (hi as i128 - lo as i128 + 1) as u128;
    match field {
        Field::Rationals => width,
        Field::Prime(p) => width.min(p as u128),
    }
}

pub fn generate(field: Field, spec: GenSpec) -> Result<PointSet, GenError> {
    if spec.nvars == 0 {
        return Err(GenError::NoVariables);
    }
    if spec.lo > spec.hi {
        return Err(GenError::EmptyRange { lo: spec.lo, hi: spec.hi });
    }
    let per_coord = distinct_values(field, spec.lo, spec.hi);
    let available = (0..spec.nvars).try_fold(1u128, |acc, _| acc.checked_mul(per_coord)).unwrap_or(u128::MAX);
    if available < spec.points as u128 {
        return Err(GenError::TooFewPoints { available, requested: spec.points });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = HashSet::new();
    let mut points: Vec<Point> = Vec::with_capacity(spec.points);
    while points.len() < spec.points {
        let p: Point = (0..spec.nvars).map(|_| field.from_i64(rng.gen_range(spec.lo..=spec.hi))).collect();
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    Ok(PointSet::new(field, points).expect("points are distinct by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(nvars: usize, points: usize, lo: i64, hi: i64, seed: u64) -> GenSpec {
        GenSpec { nvars, points, lo, hi, seed }
    }

    #[test]
    fn deterministic_and_distinct() {
        let a = generate(Field::Rationals, spec(3, 20, 0, 6, 7)).unwrap();
        let b = generate(Field::Rationals, spec(3, 20, 0, 6, 7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert_ne!(a, generate(Field::Rationals, spec(3, 20, 0, 6, 8)).unwrap());
    }

    #[test]
    fn exhausts_small_grid() {
        let x = generate(Field::Rationals, spec(2, 4, 0, 1, 0)).unwrap();
        assert_eq!(x.len(), 4);
    }

    #[test]
    fn rejects_impossible_requests() {
        assert!(matches!(generate(Field::Rationals, spec(1, 3, 0, 1, 0)), Err(GenError::TooFewPoints { .. })));
        let f5 = Field::prime(5).unwrap();
        assert!(matches!(generate(f5, spec(1, 6, 0, 100, 0)), Err(GenError::TooFewPoints { available: 5, .. })));
        assert_eq!(generate(Field::Rationals, spec(1, 1, 2, 1, 0)), Err(GenError::EmptyRange { lo: 2, hi: 1 }));
        assert_eq!(generate(Field::Rationals, spec(0, 1, 0, 1, 0)), Err(GenError::NoVariables));
    }
}
