//! Degree-preserving ring homomorphisms between torus rings, given by images
//! of the variables.

use crate::coeff::CoeffRing;
use crate::error::{Error, Result};
use crate::poly::{DegreeView, TorusPoly};

/// A substitution `w_i -> w_images[i-1]`, `u_i -> u_images[i-1]` extending to
/// a ring homomorphism. Each `w` image must be `u`-free and homogeneous of
/// degree 1 (or zero); each `u` image must have degree 0 and be idempotent,
/// so the homomorphism preserves both the grading and the idempotent ideal.
#[derive(Debug, Clone)]
pub struct Substitution<C: CoeffRing> {
    source_n: usize,
    target_n: usize,
    w_images: Vec<TorusPoly<C>>,
    u_images: Vec<TorusPoly<C>>,
}

impl<C: CoeffRing> Substitution<C> {
    pub fn new(
        source_n: usize,
        target_n: usize,
        w_images: Vec<TorusPoly<C>>,
        u_images: Vec<TorusPoly<C>>,
    ) -> Result<Self> {
        if w_images.len() != source_n || u_images.len() != source_n {
            return Err(Error::BadSubstitution {
                what: "image list".into(),
                reason: format!(
                    "expected {source_n} w and u images, got {} and {}",
                    w_images.len(),
                    u_images.len()
                ),
            });
        }
        for (k, img) in w_images.iter().enumerate() {
            if img.rank() != target_n {
                return Err(Error::RankMismatch { left: img.rank(), right: target_n });
            }
            if !img.is_u_free() {
                return Err(Error::BadSubstitution {
                    what: format!("w{}", k + 1),
                    reason: "image is not u-free".into(),
                });
            }
            match img.degree_info() {
                DegreeView::Zero | DegreeView::Homogeneous(1) => {}
                DegreeView::Homogeneous(d) => {
                    return Err(Error::BadSubstitution {
                        what: format!("w{}", k + 1),
                        reason: format!("image has degree {d}, expected 1"),
                    });
                }
                DegreeView::Mixed { lo, hi } => {
                    return Err(Error::BadSubstitution {
                        what: format!("w{}", k + 1),
                        reason: format!("image mixes degrees {lo} and {hi}"),
                    });
                }
            }
        }
        for (k, img) in u_images.iter().enumerate() {
            if img.rank() != target_n {
                return Err(Error::RankMismatch { left: img.rank(), right: target_n });
            }
            match img.degree_info() {
                DegreeView::Zero | DegreeView::Homogeneous(0) => {}
                _ => {
                    return Err(Error::BadSubstitution {
                        what: format!("u{}", k + 1),
                        reason: "image has positive degree".into(),
                    });
                }
            }
            let sq = img.mul(img)?;
            if &sq != img {
                return Err(Error::BadSubstitution {
                    what: format!("u{}", k + 1),
                    reason: "image is not idempotent".into(),
                });
            }
        }
        Ok(Substitution { source_n, target_n, w_images, u_images })
    }

    /// The identity substitution on `n` variable pairs.
    pub fn identity(n: usize) -> Self {
        let w_images = (1..=n)
            .map(|i| TorusPoly::var_w(n, i).expect("index in range"))
            .collect();
        let u_images = (1..=n)
            .map(|i| TorusPoly::var_u(n, i).expect("index in range"))
            .collect();
        Substitution { source_n: n, target_n: n, w_images, u_images }
    }

    pub fn source_rank(&self) -> usize {
        self.source_n
    }

    pub fn target_rank(&self) -> usize {
        self.target_n
    }

    pub fn w_image(&self, i: usize) -> &TorusPoly<C> {
        &self.w_images[i - 1]
    }

    pub fn u_image(&self, i: usize) -> &TorusPoly<C> {
        &self.u_images[i - 1]
    }

    /// Apply the homomorphism.
    pub fn apply(&self, p: &TorusPoly<C>) -> Result<TorusPoly<C>> {
        if p.rank() != self.source_n {
            return Err(Error::RankMismatch { left: p.rank(), right: self.source_n });
        }
        let mut out = TorusPoly::zero(self.target_n);
        for (m, c) in p.terms() {
            let mut image = TorusPoly::constant(self.target_n, c.clone());
            for (i, &a) in m.w.iter().enumerate() {
                if a > 0 {
                    image = image.mul(&self.w_images[i].pow(a))?;
                }
            }
            for (i, &e) in m.u.iter().enumerate() {
                if e {
                    image = image.mul(&self.u_images[i])?;
                }
            }
            out = out.add(&image)?;
        }
        Ok(out)
    }

    /// The composite `p -> other(self(p))`.
    pub fn then(&self, other: &Substitution<C>) -> Result<Substitution<C>> {
        if self.target_n != other.source_n {
            return Err(Error::RankMismatch { left: self.target_n, right: other.source_n });
        }
        let w_images = self
            .w_images
            .iter()
            .map(|img| other.apply(img))
            .collect::<Result<Vec<_>>>()?;
        let u_images = self
            .u_images
            .iter()
            .map(|img| other.apply(img))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(self.source_n, other.target_n, w_images, u_images)
    }
}
