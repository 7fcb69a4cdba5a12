//! Restricted root systems and their structural invariants.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A reduced root `α` with the multiplicities of `α` and `2α`.
#[derive(Clone, Debug, PartialEq)]
pub struct Root<T> {
    pub vector: Vec<T>,
    pub m_alpha: u32,
    pub m_2alpha: u32,
}

/// Reduced positive roots on `ℝ^l` with the Euclidean inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDatum<T> {
    name: String,
    rank: usize,
    roots: Vec<Root<T>>,
    rho: Vec<T>,
}

pub const PRESETS: [&str; 5] = ["h2", "h3", "h4", "ch2", "a2"];

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

impl<T: Real> RootDatum<T> {
    pub fn new(name: impl Into<String>, rank: usize, roots: Vec<Root<T>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRootDatum("rank must be positive".into()));
        }
        for (i, r) in roots.iter().enumerate() {
            if r.vector.len() != rank {
                return Err(Error::InvalidRootDatum(format!(
                    "root {i} has {} components, expected {rank}",
                    r.vector.len()
                )));
            }
            if norm(&r.vector) == T::zero() {
                return Err(Error::InvalidRootDatum(format!("root {i} is zero")));
            }
        }
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                if i != j && is_positive_multiple(&a.vector, &b.vector) {
                    return Err(Error::InvalidRootDatum(format!(
                        "root {i} is a positive multiple of root {j}"
                    )));
                }
            }
        }
        let mut rho = vec![T::zero(); rank];
        for r in &roots {
            let w = T::lit(0.5) * T::lit(f64::from(r.m_alpha + 2 * r.m_2alpha));
            for (acc, &c) in rho.iter_mut().zip(&r.vector) {
                *acc = *acc + w * c;
            }
        }
        Ok(Self { name: name.into(), rank, roots, rho })
    }

    /// Built-in root data: real hyperbolic spaces `h2`, `h3`, `h4`, complex
    /// hyperbolic `ch2` and `a2` (SL(3,ℝ)/SO(3)).
    pub fn preset(name: &str) -> Result<Self> {
        let rank_one = |m_alpha, m_2alpha| {
            vec![Root { vector: vec![T::one()], m_alpha, m_2alpha }]
        };
        match name {
            "h2" => Self::new(name, 1, rank_one(1, 0)),
            "h3" => Self::new(name, 1, rank_one(2, 0)),
            "h4" => Self::new(name, 1, rank_one(3, 0)),
            "ch2" => Self::new(name, 1, rank_one(2, 1)),
            "a2" => {
                let h = T::lit(3.0).sqrt() * T::lit(0.5);
                let roots = vec![
                    Root { vector: vec![T::one(), T::zero()], m_alpha: 1, m_2alpha: 0 },
                    Root { vector: vec![-T::lit(0.5), h], m_alpha: 1, m_2alpha: 0 },
                    Root { vector: vec![T::lit(0.5), h], m_alpha: 1, m_2alpha: 0 },
                ];
                Self::new(name, 2, roots)
            }
            _ => Err(Error::UnknownPreset {
                name: name.to_string(),
                valid: PRESETS.join(", "),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `l`, the dimension of `𝔞`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Root<T>] {
        &self.roots
    }

    /// `d`, the number of reduced positive roots.
    pub fn d(&self) -> usize {
        self.roots.len()
    }

    /// `n = l + Σ (m_α + m_2α)`, the dimension of the symmetric space.
    pub fn n(&self) -> usize {
        self.rank
            + self
                .roots
                .iter()
                .map(|r| (r.m_alpha + r.m_2alpha) as usize)
                .sum::<usize>()
    }

    /// `ν = 2d + l`.
    pub fn nu(&self) -> usize {
        2 * self.d() + self.rank
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    /// `⟨λ, α⟩ / ⟨α, α⟩`.
    pub fn pairing(&self, lambda: &[T], alpha: &[T]) -> T {
        dot(lambda, alpha) / dot(alpha, alpha)
    }

    /// `ρ(H) = ⟨ρ, H⟩`.
    pub fn rho_of(&self, h: &[T]) -> T {
        dot(&self.rho, h)
    }

    /// `s_α(λ) = λ − 2 (⟨λ,α⟩/⟨α,α⟩) α`.
    pub fn reflect(&self, lambda: &[T], alpha: &[T]) -> Vec<T> {
        let c = T::lit(2.0) * self.pairing(lambda, alpha);
        lambda.iter().zip(alpha).map(|(&x, &a)| x - c * a).collect()
    }

    /// Orbit of `λ` under the group generated by the root reflections,
    /// found by closing under reflections up to `tol`.
    pub fn weyl_orbit(&self, lambda: &[T], tol: T) -> Vec<Vec<T>> {
        let mut orbit = vec![lambda.to_vec()];
        let mut frontier = vec![lambda.to_vec()];
        while let Some(v) = frontier.pop() {
            for r in &self.roots {
                let w = self.reflect(&v, &r.vector);
                let known = orbit.iter().any(|o| {
                    o.iter().zip(&w).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max) <= tol
                });
                if !known {
                    orbit.push(w.clone());
                    frontier.push(w);
                }
            }
            if orbit.len() > 1024 {
                break;
            }
        }
        orbit
    }
}

fn is_positive_multiple<T: Real>(a: &[T], b: &[T]) -> bool {
    let na = norm(a);
    let nb = norm(b);
    let cos = dot(a, b) / (na * nb);
    cos > T::one() - T::lit(1e3) * T::epsilon()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_invariants() {
        let h3 = RootDatum::<f64>::preset("h3").unwrap();
        assert_eq!((h3.rank(), h3.d(), h3.n(), h3.nu()), (1, 1, 3, 3));
        assert_eq!(h3.rho(), &[1.0]);
        let a2 = RootDatum::<f64>::preset("a2").unwrap();
        assert_eq!((a2.rank(), a2.d(), a2.n(), a2.nu()), (2, 3, 5, 8));
        let ch2 = RootDatum::<f64>::preset("ch2").unwrap();
        assert_eq!((ch2.rank(), ch2.d(), ch2.n(), ch2.nu()), (1, 1, 4, 3));
        assert_eq!(ch2.rho(), &[2.0]);
        assert_eq!(ch2.rho_of(&[2.0]), 4.0);
        assert_eq!(RootDatum::<f64>::preset("h2").unwrap().rho(), &[0.5]);
        assert_eq!(RootDatum::<f64>::preset("h4").unwrap().rho(), &[1.5]);
    }

    #[test]
    fn unknown_preset_lists_names() {
        let err = RootDatum::<f64>::preset("e8").unwrap_err();
        let msg = err.to_string();
        for p in PRESETS {
            assert!(msg.contains(p));
        }
    }

    #[test]
    fn rejects_degenerate_roots() {
        let zero = Root { vector: vec![0.0, 0.0], m_alpha: 1, m_2alpha: 0 };
        assert!(RootDatum::new("z", 2, vec![zero]).is_err());
        let a = Root { vector: vec![1.0, 0.0], m_alpha: 1, m_2alpha: 0 };
        let b = Root { vector: vec![2.0, 0.0], m_alpha: 1, m_2alpha: 0 };
        assert!(RootDatum::new("m", 2, vec![a, b]).is_err());
    }

    #[test]
    fn a2_orbit_has_six_elements() {
        let a2 = RootDatum::<f64>::preset("a2").unwrap();
        assert_eq!(a2.weyl_orbit(&[0.3, 0.7], 1e-12).len(), 6);
        assert_eq!(a2.pairing(&[1.0, 0.0], &[1.0, 0.0]), 1.0);
    }

    #[test]
    fn single_precision_presets() {
        let a2 = RootDatum::<f32>::preset("a2").unwrap();
        assert!((a2.rho()[1] - 3f32.sqrt() * 0.5).abs() < 1e-6);
    }
}
