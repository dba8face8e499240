//! Shifted, rotated, hybrid and composition benchmark functions on the
//! `[-100, 100]^D` box.
//!
//! Shift vectors and rotation matrices are seeded deterministic stand-ins
//! for the published CEC-2017 data files, so landscapes have the same shape
//! and optimum values (`Z*`) but not the same coordinates. The composition
//! functions use a simplified distance-weighted combinator.

mod base;
mod registry;
mod rotation;

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use base::{eval_base, rosenbrock_classic, BaseFunction};
pub use registry::{build_objective, catalog, clpso_suite, lookup, pso_suite, FunctionDef};
pub use rotation::make_rotation;

use crate::error::{Error, Result};
use crate::stream::random_permutation;
use crate::swarm::{Objective, SearchSpace};

/// Search box shared by every function in the suite.
pub const BOX_LOWER: f64 = -100.0;
pub const BOX_UPPER: f64 = 100.0;
/// Shift vectors are drawn from the central 80% of the box.
pub const SHIFT_RADIUS: f64 = 80.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ObjectiveSeeds {
    pub shift: u64,
    pub rotation: u64,
    #[serde(default)]
    pub permutation: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionComponent {
    pub base: BaseFunction,
    pub shift: Array1<f64>,
    pub rotation: Array2<f64>,
    pub sigma: f64,
    pub lambda: f64,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    Single(BaseFunction),
    /// The rotated input is permuted, then cut into consecutive segments,
    /// one per component.
    Hybrid {
        permutation: Vec<usize>,
        parts: Vec<(BaseFunction, usize)>,
    },
    Composition(Vec<CompositionComponent>),
}

/// A benchmark instance: `f(x) = base(M (x - o)) + Z*` or one of its
/// hybrid/composition generalizations.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub dim: usize,
    /// Location of the global optimum.
    pub shift: Array1<f64>,
    pub rotation: Array2<f64>,
    pub bias: f64,
    pub layout: Layout,
    pub seeds: ObjectiveSeeds,
}

fn draw_shift(d: usize, seed: u64, stream: u64) -> Array1<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    Array1::from_shape_simple_fn(d, || rng.random_range(-SHIFT_RADIUS..SHIFT_RADIUS))
}

/// Shifted and rotated `base` with optimum value `bias`.
pub fn make_objective(
    base: BaseFunction,
    d: usize,
    shift_seed: u64,
    rot_seed: u64,
    bias: f64,
) -> Result<ObjectiveSpec> {
    if d < base.min_dim() {
        return Err(Error::invalid(format!(
            "{base} is not defined in {d} dimensions (minimum {})",
            base.min_dim()
        )));
    }
    Ok(ObjectiveSpec {
        dim: d,
        shift: draw_shift(d, shift_seed, 0),
        rotation: make_rotation(d, rot_seed),
        bias,
        layout: Layout::Single(base),
        seeds: ObjectiveSeeds {
            shift: shift_seed,
            rotation: rot_seed,
            permutation: 0,
        },
    })
}

/// Segment lengths: `ceil(p_k d)` for all but the last component, which
/// takes the remainder.
fn partition(proportions: &[f64], d: usize) -> Result<Vec<usize>> {
    let mut sizes = Vec::with_capacity(proportions.len());
    let mut used = 0usize;
    for &p in &proportions[..proportions.len() - 1] {
        let size = (p * d as f64 - 1e-9).ceil().max(0.0) as usize;
        sizes.push(size);
        used += size;
    }
    if used >= d {
        return Err(Error::invalid(format!(
            "{d} dimensions are too few for {} hybrid components",
            proportions.len()
        )));
    }
    sizes.push(d - used);
    Ok(sizes)
}

/// Hybrid function: shift, rotate, permute the coordinates (seeded), split
/// them by `proportions` and sum the component values plus `bias`.
pub fn make_hybrid(
    components: &[BaseFunction],
    proportions: &[f64],
    d: usize,
    seeds: ObjectiveSeeds,
    bias: f64,
) -> Result<ObjectiveSpec> {
    if components.is_empty() {
        return Err(Error::invalid("hybrid function needs at least one component"));
    }
    if components.len() != proportions.len() {
        return Err(Error::invalid(format!(
            "{} components but {} proportions",
            components.len(),
            proportions.len()
        )));
    }
    let total: f64 = proportions.iter().sum();
    if (total - 1.0).abs() > 1e-9 || proportions.iter().any(|&p| p <= 0.0) {
        return Err(Error::invalid(format!(
            "proportions must be positive and sum to 1, got {proportions:?}"
        )));
    }
    let sizes = partition(proportions, d)?;
    for (&base, &size) in components.iter().zip(&sizes) {
        if size < base.min_dim() {
            return Err(Error::invalid(format!(
                "{base} receives {size} of {d} dimensions, needs {}",
                base.min_dim()
            )));
        }
    }
    // A single component has nothing to distribute.
    let permutation = if components.len() == 1 {
        (0..d).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds.permutation);
        random_permutation(d, &mut rng)
    };
    Ok(ObjectiveSpec {
        dim: d,
        shift: draw_shift(d, seeds.shift, 0),
        rotation: make_rotation(d, seeds.rotation),
        bias,
        layout: Layout::Hybrid {
            permutation,
            parts: components.iter().copied().zip(sizes).collect(),
        },
        seeds,
    })
}

/// One component of a composition: base function, width `sigma`, height
/// scale `lambda` and offset `bias`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionPart {
    pub base: BaseFunction,
    pub sigma: f64,
    pub lambda: f64,
    pub bias: f64,
}

/// Distance-weighted blend of shifted, rotated components. The first
/// component's optimum is the global one and its bias should be 0.
///
/// This is a simplified combinator; it keeps the multi-funnel character of
/// the CEC compositions but is not numerically faithful to them.
pub fn make_composition(
    parts: &[CompositionPart],
    d: usize,
    seeds: ObjectiveSeeds,
    bias: f64,
) -> Result<ObjectiveSpec> {
    if parts.is_empty() {
        return Err(Error::invalid("composition needs at least one component"));
    }
    if let Some(p) = parts.iter().find(|p| d < p.base.min_dim() || p.sigma <= 0.0) {
        return Err(Error::invalid(format!(
            "invalid composition component {} (sigma {}) in {d} dimensions",
            p.base, p.sigma
        )));
    }
    let components: Vec<CompositionComponent> = parts
        .iter()
        .enumerate()
        .map(|(k, p)| CompositionComponent {
            base: p.base,
            shift: draw_shift(d, seeds.shift, k as u64),
            rotation: make_rotation(d, seeds.rotation.wrapping_add(k as u64)),
            sigma: p.sigma,
            lambda: p.lambda,
            bias: p.bias,
        })
        .collect();
    Ok(ObjectiveSpec {
        dim: d,
        shift: components[0].shift.clone(),
        rotation: components[0].rotation.clone(),
        bias,
        layout: Layout::Composition(components),
        seeds,
    })
}

/// `(fitness - z_star) / |z_star|`.
pub fn relative_error(fitness: f64, z_star: f64) -> Result<f64> {
    if z_star == 0.0 {
        return Err(Error::invalid("relative error is undefined for a zero optimum"));
    }
    Ok((fitness - z_star) / z_star.abs())
}

fn transform(x: &[f64], shift: &Array1<f64>, rotation: &Array2<f64>) -> Array1<f64> {
    let diff = Array1::from_iter(x.iter().zip(shift).map(|(a, o)| a - o));
    rotation.dot(&diff)
}

impl ObjectiveSpec {
    pub fn search_space(&self) -> SearchSpace {
        SearchSpace::cube(self.dim, BOX_LOWER, BOX_UPPER).expect("valid box")
    }

    pub fn optimum(&self) -> &Array1<f64> {
        &self.shift
    }

    /// Checked evaluation: rejects wrong lengths and non-finite input.
    pub fn try_evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::invalid(format!(
                "point has {} coordinates, function has {}",
                x.len(),
                self.dim
            )));
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite coordinate {v}")));
        }
        Ok(self.value(x))
    }

    fn value(&self, x: &[f64]) -> f64 {
        match &self.layout {
            Layout::Single(base) => {
                let z = transform(x, &self.shift, &self.rotation) * base.input_scale();
                base.eval_unchecked(z.as_slice().expect("contiguous")) + self.bias
            }
            Layout::Hybrid { permutation, parts } => {
                let y = transform(x, &self.shift, &self.rotation);
                let shuffled: Vec<f64> = permutation.iter().map(|&k| y[k]).collect();
                let mut start = 0;
                let mut total = 0.0;
                for &(base, len) in parts {
                    let scale = base.input_scale();
                    let seg: Vec<f64> = shuffled[start..start + len].iter().map(|v| v * scale).collect();
                    total += base.eval_unchecked(&seg);
                    start += len;
                }
                total + self.bias
            }
            Layout::Composition(components) => self.composition_value(components, x),
        }
    }

    fn composition_value(&self, components: &[CompositionComponent], x: &[f64]) -> f64 {
        let d = self.dim as f64;
        let dist2: Vec<f64> = components
            .iter()
            .map(|c| x.iter().zip(&c.shift).map(|(a, o)| (a - o).powi(2)).sum())
            .collect();
        let weights: Vec<f64> = if let Some(hit) = dist2.iter().position(|&r| r == 0.0) {
            (0..components.len()).map(|k| if k == hit { 1.0 } else { 0.0 }).collect()
        } else {
            let raw: Vec<f64> = components
                .iter()
                .zip(&dist2)
                .map(|(c, &r)| (-r / (2.0 * d * c.sigma * c.sigma)).exp() / r.sqrt())
                .collect();
            let sum: f64 = raw.iter().sum();
            if sum > 0.0 {
                raw.iter().map(|w| w / sum).collect()
            } else {
                vec![1.0 / components.len() as f64; components.len()]
            }
        };
        let mut total = 0.0;
        for (c, w) in components.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let z = transform(x, &c.shift, &c.rotation) * c.base.input_scale();
            let g = c.base.eval_unchecked(z.as_slice().expect("contiguous"));
            total += w * (c.lambda * g + c.bias);
        }
        total + self.bias
    }
}

impl Objective for ObjectiveSpec {
    fn evaluate(&self, x: &[f64]) -> f64 {
        if x.iter().any(|v| !v.is_finite()) {
            return f64::NAN;
        }
        self.value(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimum_value_is_the_bias() {
        let zak = make_objective(BaseFunction::Zakharov, 10, 1, 2, 300.0).unwrap();
        assert_eq!(zak.try_evaluate(zak.optimum().as_slice().unwrap()).unwrap(), 300.0);
        let ras = make_objective(BaseFunction::Rastrigin, 10, 3, 4, 500.0).unwrap();
        assert_eq!(ras.try_evaluate(ras.optimum().as_slice().unwrap()).unwrap(), 500.0);
    }

    #[test]
    fn identity_transform_reduces_to_base() {
        let mut spec = make_objective(BaseFunction::Rastrigin, 4, 1, 1, 0.0).unwrap();
        spec.shift = Array1::zeros(4);
        spec.rotation = Array2::eye(4);
        let x = [0.3, -1.2, 2.5, 0.0];
        let scaled: Vec<f64> = x.iter().map(|v| v * 5.12 / 100.0).collect();
        let expected = eval_base(BaseFunction::Rastrigin, &scaled).unwrap();
        assert_eq!(spec.try_evaluate(&x).unwrap(), expected);

        let mut sphere = make_objective(BaseFunction::Sphere, 3, 1, 1, 0.0).unwrap();
        sphere.shift = Array1::zeros(3);
        sphere.rotation = Array2::eye(3);
        assert_eq!(sphere.try_evaluate(&[1.0, 2.0, 3.0]).unwrap(), 14.0);
    }

    #[test]
    fn shift_stays_in_central_region() {
        let spec = make_objective(BaseFunction::Sphere, 200, 9, 9, 0.0).unwrap();
        assert!(spec.shift.iter().all(|v| v.abs() <= SHIFT_RADIUS));
    }

    #[test]
    fn rotation_seed_does_not_move_the_optimum_value() {
        for rot in 0..5 {
            let spec = make_objective(BaseFunction::Levy, 10, 7, rot, 900.0).unwrap();
            assert_eq!(spec.try_evaluate(spec.shift.as_slice().unwrap()).unwrap(), 900.0);
        }
    }

    #[test]
    fn unsupported_dimension() {
        assert!(make_objective(BaseFunction::SchafferF7, 1, 0, 0, 100.0).is_err());
    }

    #[test]
    fn hybrid_partition() {
        assert_eq!(partition(&[0.2, 0.4, 0.4], 10).unwrap(), vec![2, 4, 4]);
        assert_eq!(partition(&[0.3, 0.3, 0.4], 10).unwrap(), vec![3, 3, 4]);
        assert_eq!(partition(&[0.1, 0.2, 0.2, 0.2, 0.3], 30).unwrap(), vec![3, 6, 6, 6, 9]);
        assert!(partition(&[0.5, 0.5], 1).is_err());
        let sizes = partition(&[0.2, 0.2, 0.3, 0.3], 17).unwrap();
        assert_eq!(sizes.iter().sum::<usize>(), 17);
    }

    #[test]
    fn hybrid_optimum_and_single_component() {
        let h = make_hybrid(
            &[BaseFunction::Zakharov, BaseFunction::Rosenbrock, BaseFunction::Rastrigin],
            &[0.2, 0.4, 0.4],
            10,
            ObjectiveSeeds { shift: 1, rotation: 2, permutation: 3 },
            1100.0,
        )
        .unwrap();
        assert_eq!(h.try_evaluate(h.shift.as_slice().unwrap()).unwrap(), 1100.0);

        let seeds = ObjectiveSeeds { shift: 5, rotation: 6, permutation: 7 };
        let single = make_hybrid(&[BaseFunction::Ackley], &[1.0], 6, seeds, 300.0).unwrap();
        let plain = make_objective(BaseFunction::Ackley, 6, 5, 6, 300.0).unwrap();
        let x = [1.0, -20.0, 33.0, 4.5, 0.0, 99.0];
        assert_eq!(single.try_evaluate(&x).unwrap(), plain.try_evaluate(&x).unwrap());
    }

    #[test]
    fn hybrid_validation() {
        let s = ObjectiveSeeds::default();
        assert!(make_hybrid(&[], &[], 10, s, 0.0).is_err());
        assert!(make_hybrid(&[BaseFunction::Sphere], &[0.5], 10, s, 0.0).is_err());
        assert!(make_hybrid(
            &[BaseFunction::Sphere, BaseFunction::SchafferF7],
            &[0.9, 0.1],
            10,
            s,
            0.0
        )
        .is_err());
    }

    #[test]
    fn composition_optimum() {
        let parts = [
            CompositionPart { base: BaseFunction::Griewank, sigma: 10.0, lambda: 10.0, bias: 0.0 },
            CompositionPart { base: BaseFunction::Rastrigin, sigma: 20.0, lambda: 1.0, bias: 100.0 },
        ];
        let c = make_composition(&parts, 10, ObjectiveSeeds::default(), 2200.0).unwrap();
        assert_eq!(c.try_evaluate(c.shift.as_slice().unwrap()).unwrap(), 2200.0);
        assert!(c.try_evaluate(&[0.0; 10]).unwrap() >= 2200.0);
    }

    #[test]
    fn relative_error_examples() {
        assert!((relative_error(315.0, 300.0).unwrap() - 0.05).abs() < 1e-15);
        assert_eq!(relative_error(300.0, 300.0).unwrap(), 0.0);
        assert!((relative_error(440.0, 400.0).unwrap() - 0.10).abs() < 1e-15);
        assert!(relative_error(1.0, 0.0).is_err());
    }

    #[test]
    fn checked_evaluation() {
        let spec = make_objective(BaseFunction::Sphere, 3, 0, 0, 100.0).unwrap();
        assert!(spec.try_evaluate(&[0.0, 0.0]).is_err());
        assert!(spec.try_evaluate(&[0.0, f64::NAN, 0.0]).is_err());
        assert!(spec.evaluate(&[0.0, f64::NAN, 0.0]).is_nan());
    }
}
