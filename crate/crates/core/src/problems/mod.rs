//! Registry of analytic test problems.

pub mod classic;
pub mod table1;

use serde::Serialize;
use thiserror::Error;

use crate::problem::Problem;

/// Weight of the Maratos constraint penalty.
pub const MARATOS_THETA: f64 = 10.0;
/// Weight of the NONDIA valley term.
pub const NONDIA_THETA: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("invalid dimension {dim} for `{name}`: {reason}")]
    InvalidDimension {
        name: &'static str,
        dim: usize,
        reason: &'static str,
    },
    #[error("unknown suite `{0}` (expected table1, classic or all)")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Fixed(usize),
    /// Any `n ≥ min` that is a multiple of `step`.
    Scalable { min: usize, step: usize },
}

pub struct ProblemSpec {
    pub name: &'static str,
    pub family: Family,
    /// Dimension used by the suites.
    pub suite_dim: usize,
    pub note: &'static str,
    build: fn(usize) -> Problem,
}

impl ProblemSpec {
    pub fn build(&self, dim: Option<usize>) -> Result<Problem, ProblemError> {
        let n = dim.unwrap_or(self.suite_dim);
        match self.family {
            Family::Fixed(d) if n != d => Err(ProblemError::InvalidDimension {
                name: self.name,
                dim: n,
                reason: "fixed-dimension problem",
            }),
            Family::Scalable { min, .. } if n < min => Err(ProblemError::InvalidDimension {
                name: self.name,
                dim: n,
                reason: "below the minimum dimension",
            }),
            Family::Scalable { step, .. } if n % step != 0 => {
                Err(ProblemError::InvalidDimension {
                    name: self.name,
                    dim: n,
                    reason: "dimension must be a multiple of the block size",
                })
            }
            _ if n > 5000 => Err(ProblemError::InvalidDimension {
                name: self.name,
                dim: n,
                reason: "dimensions above 5000 are not supported",
            }),
            _ => Ok((self.build)(n)),
        }
    }
}

fn ncr(_: usize) -> Problem {
    table1::nesterov_chebyshev_rosenbrock()
}

fn ncr_example(_: usize) -> Problem {
    table1::nesterov_chebyshev_rosenbrock().with_start("NCR_EX1", vec![-0.61, -1.0])
}

const fn fixed(
    name: &'static str,
    dim: usize,
    note: &'static str,
    build: fn(usize) -> Problem,
) -> ProblemSpec {
    ProblemSpec {
        name,
        family: Family::Fixed(dim),
        suite_dim: dim,
        note,
        build,
    }
}

const fn scalable(
    name: &'static str,
    min: usize,
    step: usize,
    suite_dim: usize,
    note: &'static str,
    build: fn(usize) -> Problem,
) -> ProblemSpec {
    ProblemSpec {
        name,
        family: Family::Scalable { min, step },
        suite_dim,
        note,
        build,
    }
}

static TABLE1: [ProblemSpec; 3] = [
    fixed("NCR", 2, "Nesterov–Chebyshev–Rosenbrock, start (-1, 1.5)", ncr),
    fixed("MARATOS", 2, "Maratos, theta = 10, start (1, 0.95)", |_| {
        table1::maratos(MARATOS_THETA)
    }),
    fixed("NONDIA", 2, "NONDIA, theta = 100, start (-0.9, 1.17)", |_| {
        table1::nondia(NONDIA_THETA)
    }),
];

static EXTRA: [ProblemSpec; 1] = [fixed(
    "NCR_EX1",
    2,
    "Nesterov–Chebyshev–Rosenbrock, start (-0.61, -1)",
    ncr_example,
)];

static CLASSIC: [ProblemSpec; 24] = [
    scalable("EXTROSEN", 2, 2, 100, "extended Rosenbrock", classic::extended_rosenbrock),
    fixed("ROSENBR", 2, "Rosenbrock", |_| classic::rosenbrock()),
    scalable("GENROSE", 2, 1, 100, "generalized Rosenbrock", classic::genrose),
    scalable("ARWHEAD", 2, 1, 100, "arrowhead quartic", classic::arwhead),
    scalable("DQDRTIC", 3, 1, 100, "diagonal quadratic", classic::dqdrtic),
    scalable("BDQRTIC", 5, 1, 100, "banded quartic", classic::bdqrtic),
    scalable("ENGVAL1", 2, 1, 100, "Engvall chained quartic", classic::engval1),
    scalable("EDENSCH", 2, 1, 100, "extended Dennis–Schnabel", classic::edensch),
    scalable("LIARWHD", 1, 1, 100, "Li–Wang quartic", classic::liarwhd),
    scalable("NONDQUAR", 3, 1, 100, "nondiagonal quartic", classic::nondquar),
    scalable("DIXMAANA", 3, 3, 99, "Dixon–Maany A", |n| classic::dixmaan('A', n)),
    scalable("DIXMAANB", 3, 3, 99, "Dixon–Maany B", |n| classic::dixmaan('B', n)),
    scalable("DIXMAANC", 3, 3, 99, "Dixon–Maany C", |n| classic::dixmaan('C', n)),
    scalable("DIXMAAND", 3, 3, 99, "Dixon–Maany D", |n| classic::dixmaan('D', n)),
    fixed("BEALE", 2, "Beale", |_| classic::beale()),
    fixed("BROWNDEN", 4, "Brown–Dennis", |_| classic::brownden()),
    fixed("BRKMCC", 2, "Brent", |_| classic::brkmcc()),
    fixed("SISSER", 2, "Sisser quartic", |_| classic::sisser()),
    scalable("HILBERTB", 1, 1, 10, "perturbed Hilbert quadratic", classic::hilbertb),
    fixed("DENSCHNA", 2, "Dennis–Schnabel A", |_| classic::denschna()),
    fixed("DENSCHNB", 2, "Dennis–Schnabel B", |_| classic::denschnb()),
    fixed("DENSCHNC", 2, "Dennis–Schnabel C", |_| classic::denschnc()),
    fixed("CUBE", 2, "cubic valley", |_| classic::cube()),
    scalable("VARDIM", 1, 1, 10, "variably dimensioned", classic::vardim),
];

/// Every registered problem specification.
pub fn registry() -> impl Iterator<Item = &'static ProblemSpec> {
    TABLE1.iter().chain(EXTRA.iter()).chain(CLASSIC.iter())
}

pub fn find(name: &str) -> Option<&'static ProblemSpec> {
    registry().find(|s| s.name.eq_ignore_ascii_case(name))
}

/// Looks up a problem by name (case-insensitive) at `dim`, or the suite
/// dimension when `dim` is `None`.
pub fn get_problem(name: &str, dim: Option<usize>) -> Result<Problem, ProblemError> {
    find(name)
        .ok_or_else(|| ProblemError::UnknownProblem(name.to_string()))?
        .build(dim)
}

/// Problems of a named suite, in a fixed order.
pub fn list_suite(tag: &str) -> Result<Vec<Problem>, ProblemError> {
    let specs: Vec<&ProblemSpec> = match tag {
        "table1" => TABLE1.iter().collect(),
        "classic" => CLASSIC.iter().collect(),
        "all" => registry().collect(),
        other => return Err(ProblemError::UnknownSuite(other.to_string())),
    };
    specs.into_iter().map(|s| s.build(None)).collect()
}

#[derive(Debug, Serialize)]
pub struct ProblemInfo {
    pub name: String,
    pub dim: usize,
    pub start: Vec<f64>,
    pub f_star: Option<f64>,
}

impl From<&Problem> for ProblemInfo {
    fn from(p: &Problem) -> Self {
        Self {
            name: p.name.clone(),
            dim: p.dim(),
            start: p.x0.clone(),
            f_star: p.f_star,
        }
    }
}

/// JSON listing of `problems`: name, dimension, start and known optimum.
pub fn to_json(problems: &[Problem]) -> serde_json::Result<String> {
    let infos: Vec<ProblemInfo> = problems.iter().map(ProblemInfo::from).collect();
    serde_json::to_string_pretty(&infos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_values_at_known_points() {
        let ncr = get_problem("ncr", None).unwrap();
        assert_eq!(ncr.eval_f(&[1.0, 1.0]), 0.0);
        assert_eq!(ncr.eval_grad(&[1.0, 1.0]), vec![0.0, 0.0]);
        // 0.25·4 + (1.5 − 2 + 1)² at the standard start
        assert_eq!(ncr.eval_f(&ncr.x0), 1.25);

        let nondia = get_problem("NONDIA", None).unwrap();
        assert_eq!(nondia.eval_f(&[1.0, 1.0]), 0.0);
        assert_eq!(nondia.eval_grad(&[1.0, 1.0]), vec![0.0, 0.0]);

        // 1 + 10·(1 + 0.9025 − 1)²
        let m = get_problem("MARATOS", None).unwrap();
        assert!((m.eval_f(&m.x0) - 9.1450625).abs() < 1e-12);
    }

    #[test]
    fn suites_have_expected_sizes() {
        assert_eq!(list_suite("table1").unwrap().len(), 3);
        let classic = list_suite("classic").unwrap();
        assert!(classic.len() >= 20);
        assert!(classic.iter().all(|p| p.dim() <= 200));
        assert_eq!(list_suite("all").unwrap().len(), 3 + 1 + classic.len());
        assert_eq!(
            list_suite("cutest").unwrap_err(),
            ProblemError::UnknownSuite("cutest".into())
        );
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<String> = registry().map(|s| s.name.to_ascii_uppercase()).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn dimension_handling() {
        assert_eq!(get_problem("EXTROSEN", Some(10)).unwrap().dim(), 10);
        assert!(matches!(
            get_problem("EXTROSEN", Some(7)),
            Err(ProblemError::InvalidDimension { .. })
        ));
        assert!(matches!(
            get_problem("NCR", Some(3)),
            Err(ProblemError::InvalidDimension { .. })
        ));
        assert!(matches!(
            get_problem("GENROSE", Some(6000)),
            Err(ProblemError::InvalidDimension { .. })
        ));
        assert_eq!(
            get_problem("nope", None).unwrap_err(),
            ProblemError::UnknownProblem("nope".into())
        );
    }

    #[test]
    fn known_optima_are_stationary() {
        for p in list_suite("all").unwrap() {
            if let Some(xs) = &p.x_star {
                let g = p.eval_grad(xs);
                let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                assert!(gmax < 1e-8, "{}: |g(x*)| = {gmax}", p.name);
                if let Some(fs) = p.f_star {
                    assert!((p.eval_f(xs) - fs).abs() <= 1e-10 * fs.abs().max(1.0), "{}", p.name);
                }
            }
        }
    }

    #[test]
    fn json_listing() {
        let json = to_json(&list_suite("table1").unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v[1]["name"], "MARATOS");
        assert_eq!(v[2]["start"][1], 1.17);
    }
}
