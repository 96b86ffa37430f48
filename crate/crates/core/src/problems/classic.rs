//! Standard unconstrained test problems, following their usual published
//! definitions (CUTEst names).

use std::sync::Arc;

use crate::problem::{FnObjective, Problem};

fn problem<F, G>(name: &str, x0: Vec<f64>, f: F, g: G) -> Problem
where
    F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
{
    Problem::new(name, x0, Arc::new(FnObjective::new(f, g)))
}

pub fn rosenbrock() -> Problem {
    problem(
        "ROSENBR",
        vec![-1.2, 1.0],
        |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
        |x, g| {
            let r = x[1] - x[0] * x[0];
            g[0] = -400.0 * x[0] * r - 2.0 * (1.0 - x[0]);
            g[1] = 200.0 * r;
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![1.0, 1.0])
}

/// Extended Rosenbrock: independent Rosenbrock pairs, `n` even.
pub fn extended_rosenbrock(n: usize) -> Problem {
    let x0 = (0..n).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect();
    problem(
        "EXTROSEN",
        x0,
        |x| {
            x.chunks_exact(2)
                .map(|p| 100.0 * (p[1] - p[0] * p[0]).powi(2) + (1.0 - p[0]).powi(2))
                .sum()
        },
        |x, g| {
            for (p, gp) in x.chunks_exact(2).zip(g.chunks_exact_mut(2)) {
                let r = p[1] - p[0] * p[0];
                gp[0] = -400.0 * p[0] * r - 2.0 * (1.0 - p[0]);
                gp[1] = 200.0 * r;
            }
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![1.0; n])
}

/// `1 + Σ_{i≥2} 100(x_i − x_{i−1}²)² + (x_i − 1)²`.
pub fn genrose(n: usize) -> Problem {
    let x0 = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
    problem(
        "GENROSE",
        x0,
        |x| {
            1.0 + x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[1] - 1.0).powi(2))
                .sum::<f64>()
        },
        |x, g| {
            g.fill(0.0);
            for i in 1..x.len() {
                let r = x[i] - x[i - 1] * x[i - 1];
                g[i] += 200.0 * r + 2.0 * (x[i] - 1.0);
                g[i - 1] -= 400.0 * x[i - 1] * r;
            }
        },
    )
    .with_f_star(1.0)
    .with_x_star(vec![1.0; n])
}

pub fn arwhead(n: usize) -> Problem {
    problem(
        "ARWHEAD",
        vec![1.0; n],
        |x| {
            let xn2 = x[x.len() - 1].powi(2);
            x[..x.len() - 1]
                .iter()
                .map(|&xi| -4.0 * xi + 3.0 + (xi * xi + xn2).powi(2))
                .sum()
        },
        |x, g| {
            let n = x.len();
            let xn = x[n - 1];
            g.fill(0.0);
            for i in 0..n - 1 {
                let s = x[i] * x[i] + xn * xn;
                g[i] += -4.0 + 4.0 * x[i] * s;
                g[n - 1] += 4.0 * xn * s;
            }
        },
    )
    .with_f_star(0.0)
}

pub fn bdqrtic(n: usize) -> Problem {
    fn inner(x: &[f64], i: usize) -> f64 {
        let n = x.len();
        x[i] * x[i]
            + 2.0 * x[i + 1] * x[i + 1]
            + 3.0 * x[i + 2] * x[i + 2]
            + 4.0 * x[i + 3] * x[i + 3]
            + 5.0 * x[n - 1] * x[n - 1]
    }
    problem(
        "BDQRTIC",
        vec![1.0; n],
        |x| {
            (0..x.len() - 4)
                .map(|i| (-4.0 * x[i] + 3.0).powi(2) + inner(x, i).powi(2))
                .sum()
        },
        |x, g| {
            let n = x.len();
            g.fill(0.0);
            for i in 0..n - 4 {
                let s = inner(x, i);
                g[i] += -8.0 * (-4.0 * x[i] + 3.0) + 4.0 * s * x[i];
                g[i + 1] += 8.0 * s * x[i + 1];
                g[i + 2] += 12.0 * s * x[i + 2];
                g[i + 3] += 16.0 * s * x[i + 3];
                g[n - 1] += 20.0 * s * x[n - 1];
            }
        },
    )
}

pub fn dqdrtic(n: usize) -> Problem {
    problem(
        "DQDRTIC",
        vec![3.0; n],
        |x| {
            x.windows(3)
                .map(|w| w[0] * w[0] + 100.0 * w[1] * w[1] + 100.0 * w[2] * w[2])
                .sum()
        },
        |x, g| {
            g.fill(0.0);
            for i in 0..x.len() - 2 {
                g[i] += 2.0 * x[i];
                g[i + 1] += 200.0 * x[i + 1];
                g[i + 2] += 200.0 * x[i + 2];
            }
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![0.0; n])
}

pub fn engval1(n: usize) -> Problem {
    problem(
        "ENGVAL1",
        vec![2.0; n],
        |x| {
            x.windows(2)
                .map(|w| (w[0] * w[0] + w[1] * w[1]).powi(2) - 4.0 * w[0] + 3.0)
                .sum()
        },
        |x, g| {
            g.fill(0.0);
            for i in 0..x.len() - 1 {
                let s = x[i] * x[i] + x[i + 1] * x[i + 1];
                g[i] += 4.0 * x[i] * s - 4.0;
                g[i + 1] += 4.0 * x[i + 1] * s;
            }
        },
    )
}

pub fn edensch(n: usize) -> Problem {
    problem(
        "EDENSCH",
        vec![0.0; n],
        |x| {
            16.0 + x
                .windows(2)
                .map(|w| {
                    (w[0] - 2.0).powi(4)
                        + (w[0] * w[1] - 2.0 * w[1]).powi(2)
                        + (w[1] + 1.0).powi(2)
                })
                .sum::<f64>()
        },
        |x, g| {
            g.fill(0.0);
            for i in 0..x.len() - 1 {
                let (a, b) = (x[i], x[i + 1]);
                let r = a * b - 2.0 * b;
                g[i] += 4.0 * (a - 2.0).powi(3) + 2.0 * r * b;
                g[i + 1] += 2.0 * r * (a - 2.0) + 2.0 * (b + 1.0);
            }
        },
    )
}

pub fn liarwhd(n: usize) -> Problem {
    problem(
        "LIARWHD",
        vec![4.0; n],
        |x| {
            let x1 = x[0];
            x.iter()
                .map(|&xi| 4.0 * (xi * xi - x1).powi(2) + (xi - 1.0).powi(2))
                .sum()
        },
        |x, g| {
            let x1 = x[0];
            let mut g1 = 0.0;
            for (gi, &xi) in g.iter_mut().zip(x) {
                let r = xi * xi - x1;
                *gi = 16.0 * xi * r + 2.0 * (xi - 1.0);
                g1 -= 8.0 * r;
            }
            g[0] += g1;
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![1.0; n])
}

pub fn nondquar(n: usize) -> Problem {
    let x0 = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    problem(
        "NONDQUAR",
        x0,
        |x| {
            let n = x.len();
            let xn = x[n - 1];
            (x[0] - x[1]).powi(2)
                + (0..n - 2)
                    .map(|i| (x[i] + x[i + 1] + xn).powi(4))
                    .sum::<f64>()
                + (x[n - 2] + xn).powi(2)
        },
        |x, g| {
            let n = x.len();
            let xn = x[n - 1];
            g.fill(0.0);
            let r = 2.0 * (x[0] - x[1]);
            g[0] += r;
            g[1] -= r;
            for i in 0..n - 2 {
                let c = 4.0 * (x[i] + x[i + 1] + xn).powi(3);
                g[i] += c;
                g[i + 1] += c;
                g[n - 1] += c;
            }
            let t = 2.0 * (x[n - 2] + xn);
            g[n - 2] += t;
            g[n - 1] += t;
        },
    )
    .with_f_star(0.0)
}

#[derive(Debug, Clone, Copy)]
pub struct DixonMaany {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub powers: [i32; 4],
}

/// DIXMAAN family at `n = 3m`; variants A–D share unit powers.
pub fn dixmaan(variant: char, n: usize) -> Problem {
    let beta = match variant {
        'A' => 0.0,
        'B' => 0.0625,
        'C' => 0.125,
        'D' => 0.26,
        other => panic!("unsupported DIXMAAN variant {other}"),
    };
    let p = DixonMaany {
        alpha: 1.0,
        beta,
        gamma: 0.125,
        delta: 0.125,
        powers: [0, 0, 0, 0],
    };
    let name = format!("DIXMAAN{variant}");
    problem(
        &name,
        vec![2.0; n],
        move |x| dixmaan_value(&p, x),
        move |x, g| dixmaan_grad(&p, x, g),
    )
    .with_f_star(1.0)
    .with_x_star(vec![0.0; n])
}

fn dixmaan_value(p: &DixonMaany, x: &[f64]) -> f64 {
    let n = x.len();
    let m = n / 3;
    let w = |i: usize, k: i32| (i as f64 / n as f64).powi(k);
    let mut f = 1.0;
    for i in 0..n {
        f += p.alpha * x[i] * x[i] * w(i + 1, p.powers[0]);
    }
    for i in 0..n - 1 {
        let u = x[i + 1] + x[i + 1] * x[i + 1];
        f += p.beta * x[i] * x[i] * u * u * w(i + 1, p.powers[1]);
    }
    for i in 0..2 * m {
        f += p.gamma * x[i] * x[i] * x[i + m].powi(4) * w(i + 1, p.powers[2]);
    }
    for i in 0..m {
        f += p.delta * x[i] * x[i + 2 * m] * w(i + 1, p.powers[3]);
    }
    f
}

fn dixmaan_grad(p: &DixonMaany, x: &[f64], g: &mut [f64]) {
    let n = x.len();
    let m = n / 3;
    let w = |i: usize, k: i32| (i as f64 / n as f64).powi(k);
    g.fill(0.0);
    for i in 0..n {
        g[i] += 2.0 * p.alpha * x[i] * w(i + 1, p.powers[0]);
    }
    for i in 0..n - 1 {
        let c = p.beta * w(i + 1, p.powers[1]);
        let u = x[i + 1] + x[i + 1] * x[i + 1];
        g[i] += 2.0 * c * x[i] * u * u;
        g[i + 1] += 2.0 * c * x[i] * x[i] * u * (1.0 + 2.0 * x[i + 1]);
    }
    for i in 0..2 * m {
        let c = p.gamma * w(i + 1, p.powers[2]);
        g[i] += 2.0 * c * x[i] * x[i + m].powi(4);
        g[i + m] += 4.0 * c * x[i] * x[i] * x[i + m].powi(3);
    }
    for i in 0..m {
        let c = p.delta * w(i + 1, p.powers[3]);
        g[i] += c * x[i + 2 * m];
        g[i + 2 * m] += c * x[i];
    }
}

pub fn beale() -> Problem {
    const C: [f64; 3] = [1.5, 2.25, 2.625];
    problem(
        "BEALE",
        vec![1.0, 1.0],
        |x| {
            (1..=3)
                .map(|j| (C[j - 1] - x[0] * (1.0 - x[1].powi(j as i32))).powi(2))
                .sum()
        },
        |x, g| {
            g.fill(0.0);
            for j in 1..=3i32 {
                let r = C[j as usize - 1] - x[0] * (1.0 - x[1].powi(j));
                g[0] += -2.0 * r * (1.0 - x[1].powi(j));
                g[1] += 2.0 * r * x[0] * j as f64 * x[1].powi(j - 1);
            }
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![3.0, 0.5])
}

pub fn brownden() -> Problem {
    fn terms(x: &[f64], i: usize) -> (f64, f64, f64) {
        let t = i as f64 / 5.0;
        let a = x[0] + t * x[1] - t.exp();
        let b = x[2] + x[3] * t.sin() - t.cos();
        (t, a, b)
    }
    problem(
        "BROWNDEN",
        vec![25.0, 5.0, -5.0, -1.0],
        |x| {
            (1..=20)
                .map(|i| {
                    let (_, a, b) = terms(x, i);
                    (a * a + b * b).powi(2)
                })
                .sum()
        },
        |x, g| {
            g.fill(0.0);
            for i in 1..=20 {
                let (t, a, b) = terms(x, i);
                let s = 4.0 * (a * a + b * b);
                g[0] += s * a;
                g[1] += s * a * t;
                g[2] += s * b;
                g[3] += s * b * t.sin();
            }
        },
    )
    .with_f_star(85822.20162635628)
}

pub fn brkmcc() -> Problem {
    problem(
        "BRKMCC",
        vec![2.0, 2.0],
        |x| {
            let c = -0.25 * x[0] * x[0] - x[1] * x[1] + 1.0;
            let h = x[0] - 2.0 * x[1] + 1.0;
            (x[0] - 2.0).powi(2) + (x[1] - 1.0).powi(2) + 0.04 / c + 5.0 * h * h
        },
        |x, g| {
            let c = -0.25 * x[0] * x[0] - x[1] * x[1] + 1.0;
            let h = x[0] - 2.0 * x[1] + 1.0;
            let inv2 = 0.04 / (c * c);
            g[0] = 2.0 * (x[0] - 2.0) + inv2 * 0.5 * x[0] + 10.0 * h;
            g[1] = 2.0 * (x[1] - 1.0) + inv2 * 2.0 * x[1] - 20.0 * h;
        },
    )
    .with_f_star(0.16904267919645788)
}

pub fn sisser() -> Problem {
    problem(
        "SISSER",
        vec![1.0, 0.1],
        |x| {
            let (a, b) = (x[0] * x[0], x[1] * x[1]);
            3.0 * a * a - 2.0 * a * b + 3.0 * b * b
        },
        |x, g| {
            let (a, b) = (x[0] * x[0], x[1] * x[1]);
            g[0] = 12.0 * a * x[0] - 4.0 * x[0] * b;
            g[1] = -4.0 * a * x[1] + 12.0 * b * x[1];
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![0.0, 0.0])
}

/// `½ xᵀ(H + 5I)x` with the Hilbert matrix `H`.
pub fn hilbertb(n: usize) -> Problem {
    fn entry(i: usize, j: usize) -> f64 {
        let h = 1.0 / (i + j + 1) as f64;
        if i == j {
            h + 5.0
        } else {
            h
        }
    }
    problem(
        "HILBERTB",
        vec![-3.0; n],
        |x| {
            let n = x.len();
            let mut f = 0.0;
            for i in 0..n {
                let row: f64 = (0..n).map(|j| entry(i, j) * x[j]).sum();
                f += 0.5 * x[i] * row;
            }
            f
        },
        |x, g| {
            let n = x.len();
            for i in 0..n {
                g[i] = (0..n).map(|j| entry(i, j) * x[j]).sum();
            }
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![0.0; n])
}

pub fn denschna() -> Problem {
    problem(
        "DENSCHNA",
        vec![1.0, 1.0],
        |x| x[0].powi(4) + (x[0] + x[1]).powi(2) + (x[1].exp() - 1.0).powi(2),
        |x, g| {
            let s = 2.0 * (x[0] + x[1]);
            let e = x[1].exp();
            g[0] = 4.0 * x[0].powi(3) + s;
            g[1] = s + 2.0 * (e - 1.0) * e;
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![0.0, 0.0])
}

pub fn denschnb() -> Problem {
    problem(
        "DENSCHNB",
        vec![1.0, 1.0],
        |x| {
            let a = x[0] - 2.0;
            a * a + a * a * x[1] * x[1] + (x[1] + 1.0).powi(2)
        },
        |x, g| {
            let a = x[0] - 2.0;
            g[0] = 2.0 * a * (1.0 + x[1] * x[1]);
            g[1] = 2.0 * a * a * x[1] + 2.0 * (x[1] + 1.0);
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![2.0, -1.0])
}

pub fn denschnc() -> Problem {
    problem(
        "DENSCHNC",
        vec![2.0, 3.0],
        |x| {
            let r1 = x[0] * x[0] + x[1] * x[1] - 2.0;
            let r2 = (x[0] - 1.0).exp() + x[1].powi(3) - 2.0;
            r1 * r1 + r2 * r2
        },
        |x, g| {
            let r1 = x[0] * x[0] + x[1] * x[1] - 2.0;
            let e = (x[0] - 1.0).exp();
            let r2 = e + x[1].powi(3) - 2.0;
            g[0] = 4.0 * x[0] * r1 + 2.0 * r2 * e;
            g[1] = 4.0 * x[1] * r1 + 6.0 * r2 * x[1] * x[1];
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![1.0, 1.0])
}

pub fn cube() -> Problem {
    problem(
        "CUBE",
        vec![-1.2, 1.0],
        |x| (x[0] - 1.0).powi(2) + 100.0 * (x[1] - x[0].powi(3)).powi(2),
        |x, g| {
            let r = x[1] - x[0].powi(3);
            g[0] = 2.0 * (x[0] - 1.0) - 600.0 * x[0] * x[0] * r;
            g[1] = 200.0 * r;
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![1.0, 1.0])
}

pub fn vardim(n: usize) -> Problem {
    fn weighted(x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(i, xi)| (i + 1) as f64 * (xi - 1.0))
            .sum()
    }
    let x0 = (1..=n).map(|i| 1.0 - i as f64 / n as f64).collect();
    problem(
        "VARDIM",
        x0,
        |x| {
            let r = weighted(x);
            x.iter().map(|xi| (xi - 1.0).powi(2)).sum::<f64>() + r * r + r.powi(4)
        },
        |x, g| {
            let r = weighted(x);
            let c = 2.0 * r + 4.0 * r.powi(3);
            for (i, (gi, xi)) in g.iter_mut().zip(x).enumerate() {
                *gi = 2.0 * (xi - 1.0) + c * (i + 1) as f64;
            }
        },
    )
    .with_f_star(0.0)
    .with_x_star(vec![1.0; n])
}
