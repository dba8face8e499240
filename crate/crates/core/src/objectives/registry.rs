//! Named benchmark functions and the two evaluation suites.

use super::{make_composition, make_hybrid, make_objective, CompositionPart, ObjectiveSeeds, ObjectiveSpec};
use crate::error::{Error, Result};
use BaseFunction as B;

pub use super::base::BaseFunction;

#[derive(Debug, Clone, Copy)]
enum Recipe {
    Single(BaseFunction),
    Hybrid(&'static [(BaseFunction, f64)]),
    Composition(&'static [CompositionPart]),
}

/// Registry entry: identifier, optimum value `Z*` and construction.
#[derive(Debug, Clone, Copy)]
pub struct FunctionDef {
    pub id: &'static str,
    pub z_star: f64,
    pub description: &'static str,
    recipe: Recipe,
}

impl FunctionDef {
    pub fn is_composition(&self) -> bool {
        matches!(self.recipe, Recipe::Composition(_))
    }

    pub fn build(&self, d: usize, seeds: ObjectiveSeeds) -> Result<ObjectiveSpec> {
        match self.recipe {
            Recipe::Single(base) => make_objective(base, d, seeds.shift, seeds.rotation, self.z_star)
                .map(|mut s| {
                    s.seeds = seeds;
                    s
                }),
            Recipe::Hybrid(parts) => {
                let bases: Vec<BaseFunction> = parts.iter().map(|p| p.0).collect();
                let props: Vec<f64> = parts.iter().map(|p| p.1).collect();
                make_hybrid(&bases, &props, d, seeds, self.z_star)
            }
            Recipe::Composition(parts) => make_composition(parts, d, seeds, self.z_star),
        }
    }
}

const fn part(base: BaseFunction, sigma: f64, lambda: f64, bias: f64) -> CompositionPart {
    CompositionPart { base, sigma, lambda, bias }
}

const fn single(id: &'static str, z_star: f64, base: BaseFunction, description: &'static str) -> FunctionDef {
    FunctionDef { id, z_star, description, recipe: Recipe::Single(base) }
}

const fn hybrid(id: &'static str, z_star: f64, parts: &'static [(BaseFunction, f64)], description: &'static str) -> FunctionDef {
    FunctionDef { id, z_star, description, recipe: Recipe::Hybrid(parts) }
}

const fn composition(id: &'static str, z_star: f64, parts: &'static [CompositionPart], description: &'static str) -> FunctionDef {
    FunctionDef { id, z_star, description, recipe: Recipe::Composition(parts) }
}

static CATALOG: &[FunctionDef] = &[
    single("sphere_sr", 100.0, B::Sphere, "shifted and rotated sphere"),
    single("f01_zakharov_sr", 300.0, B::Zakharov, "shifted and rotated Zakharov"),
    single("f02_rosenbrock_sr", 400.0, B::Rosenbrock, "shifted and rotated Rosenbrock"),
    single("f03_rastrigin_sr", 500.0, B::Rastrigin, "shifted and rotated Rastrigin"),
    single("f04_expanded_schaffer_f6_sr", 600.0, B::ExpandedSchafferF6, "shifted and rotated expanded Schaffer F6"),
    single("f05_lunacek_bi_rastrigin_sr", 700.0, B::LunacekBiRastrigin, "shifted and rotated Lunacek bi-Rastrigin"),
    single("f06_non_continuous_rastrigin_sr", 800.0, B::NonContinuousRastrigin, "shifted and rotated non-continuous Rastrigin"),
    single("f07_levy_sr", 900.0, B::Levy, "shifted and rotated Levy"),
    hybrid("hybrid_1100", 1100.0, &[(B::Zakharov, 0.2), (B::Rosenbrock, 0.4), (B::Rastrigin, 0.4)], "Zakharov, Rosenbrock, Rastrigin"),
    hybrid("hybrid_1300", 1300.0, &[(B::BentCigar, 0.3), (B::Rosenbrock, 0.3), (B::LunacekBiRastrigin, 0.4)], "bent cigar, Rosenbrock, Lunacek bi-Rastrigin"),
    hybrid("hybrid_1400", 1400.0, &[(B::HighConditionedElliptic, 0.2), (B::Ackley, 0.2), (B::SchafferF7, 0.2), (B::Rastrigin, 0.4)], "elliptic, Ackley, Schaffer F7, Rastrigin"),
    hybrid("hybrid_1500", 1500.0, &[(B::BentCigar, 0.2), (B::HgBat, 0.2), (B::Rastrigin, 0.3), (B::Rosenbrock, 0.3)], "bent cigar, HGBat, Rastrigin, Rosenbrock"),
    hybrid("hybrid_1600", 1600.0, &[(B::ExpandedSchafferF6, 0.2), (B::HgBat, 0.2), (B::Rosenbrock, 0.2), (B::ModifiedSchwefel, 0.2), (B::Rastrigin, 0.2)], "expanded Schaffer F6, HGBat, Rosenbrock, modified Schwefel, Rastrigin"),
    hybrid("hybrid_1700", 1700.0, &[(B::Katsuura, 0.1), (B::Ackley, 0.2), (B::ExpandedGriewankRosenbrock, 0.2), (B::ModifiedSchwefel, 0.2), (B::Rastrigin, 0.3)], "Katsuura, Ackley, expanded Griewank-Rosenbrock, modified Schwefel, Rastrigin"),
    hybrid("hybrid_1900", 1900.0, &[(B::HighConditionedElliptic, 0.2), (B::Ackley, 0.2), (B::Rastrigin, 0.2), (B::HgBat, 0.2), (B::Discus, 0.2)], "elliptic, Ackley, Rastrigin, HGBat, discus"),
    hybrid("hybrid_2000", 2000.0, &[(B::BentCigar, 0.2), (B::ExpandedGriewankRosenbrock, 0.2), (B::Rastrigin, 0.3), (B::ExpandedSchafferF6, 0.3)], "bent cigar, expanded Griewank-Rosenbrock, Rastrigin, expanded Schaffer F6"),
    composition("composition_2100", 2100.0, &[
        part(B::Katsuura, 10.0, 10.0, 0.0),
        part(B::Ackley, 20.0, 10.0, 100.0),
        part(B::Rastrigin, 30.0, 1.0, 200.0),
        part(B::SchafferF7, 40.0, 1.0, 300.0),
        part(B::ModifiedSchwefel, 50.0, 1.0, 400.0),
    ], "Katsuura, Ackley, Rastrigin, Schaffer F7, modified Schwefel (simplified)"),
    composition("composition_2200", 2200.0, &[
        part(B::Griewank, 10.0, 10.0, 0.0),
        part(B::Rastrigin, 20.0, 1.0, 100.0),
        part(B::ModifiedSchwefel, 30.0, 1.0, 200.0),
    ], "Griewank, Rastrigin, modified Schwefel (simplified)"),
    composition("composition_2400", 2400.0, &[
        part(B::Ackley, 10.0, 10.0, 0.0),
        part(B::Griewank, 20.0, 10.0, 100.0),
        part(B::Rastrigin, 30.0, 1.0, 200.0),
        part(B::HighConditionedElliptic, 40.0, 1e-6, 300.0),
    ], "Ackley, Griewank, Rastrigin, elliptic (simplified)"),
    composition("composition_2600", 2600.0, &[
        part(B::ModifiedSchwefel, 10.0, 1.0, 0.0),
        part(B::Rastrigin, 20.0, 1.0, 100.0),
        part(B::Rosenbrock, 20.0, 1.0, 200.0),
        part(B::Griewank, 30.0, 10.0, 300.0),
        part(B::ExpandedSchafferF6, 40.0, 1.0, 400.0),
    ], "modified Schwefel, Rastrigin, Rosenbrock, Griewank, expanded Schaffer F6 (simplified)"),
];

pub fn catalog() -> &'static [FunctionDef] {
    CATALOG
}

pub fn lookup(id: &str) -> Result<&'static FunctionDef> {
    CATALOG.iter().find(|f| f.id == id).ok_or_else(|| {
        let known: Vec<&str> = CATALOG.iter().map(|f| f.id).collect();
        Error::invalid(format!("unknown function id {id:?}; known ids: {}", known.join(", ")))
    })
}

pub fn build_objective(id: &str, d: usize, seeds: ObjectiveSeeds) -> Result<ObjectiveSpec> {
    lookup(id)?.build(d, seeds)
}

const SINGLES: [&str; 7] = [
    "f01_zakharov_sr",
    "f02_rosenbrock_sr",
    "f03_rastrigin_sr",
    "f04_expanded_schaffer_f6_sr",
    "f05_lunacek_bi_rastrigin_sr",
    "f06_non_continuous_rastrigin_sr",
    "f07_levy_sr",
];

/// The 15 functions used for the PSO comparisons.
pub fn pso_suite() -> Vec<&'static str> {
    let mut ids = SINGLES.to_vec();
    ids.extend([
        "hybrid_1100",
        "hybrid_1400",
        "hybrid_1500",
        "hybrid_1600",
        "hybrid_1700",
        "hybrid_1900",
        "hybrid_2000",
        "composition_2200",
    ]);
    ids
}

/// The 19 functions used for the CLPSO comparisons.
pub fn clpso_suite() -> Vec<&'static str> {
    let mut ids = SINGLES.to_vec();
    ids.extend([
        "hybrid_1100",
        "hybrid_1300",
        "hybrid_1400",
        "hybrid_1500",
        "hybrid_1600",
        "hybrid_1700",
        "hybrid_1900",
        "hybrid_2000",
        "composition_2100",
        "composition_2200",
        "composition_2400",
        "composition_2600",
    ]);
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swarm::Objective;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn suites_have_expected_sizes_and_resolve() {
        assert_eq!(pso_suite().len(), 15);
        assert_eq!(clpso_suite().len(), 19);
        for id in pso_suite().into_iter().chain(clpso_suite()) {
            lookup(id).unwrap();
        }
        assert!(lookup("f99").is_err());
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = CATALOG.iter().map(|f| f.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CATALOG.len());
    }

    #[test]
    fn every_function_attains_z_star_at_its_optimum() {
        let seeds = ObjectiveSeeds { shift: 11, rotation: 12, permutation: 13 };
        for def in CATALOG {
            for d in [10, 30] {
                let spec = def.build(d, seeds).unwrap();
                let v = spec.try_evaluate(spec.optimum().as_slice().unwrap()).unwrap();
                assert_eq!(v, def.z_star, "{} d={d}", def.id);
            }
        }
    }

    #[test]
    fn nonnegative_bases_never_go_below_z_star() {
        let seeds = ObjectiveSeeds { shift: 1, rotation: 2, permutation: 3 };
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for def in CATALOG {
            let spec = def.build(10, seeds).unwrap();
            let uses_schwefel = format!("{:?}", def.recipe).contains("ModifiedSchwefel");
            if uses_schwefel {
                continue;
            }
            for _ in 0..10_000 {
                let x: Vec<f64> = (0..10).map(|_| rng.random_range(-100.0..100.0)).collect();
                let v = spec.evaluate(&x);
                assert!(v >= def.z_star - 1e-9, "{} gave {v}", def.id);
            }
        }
    }
}
