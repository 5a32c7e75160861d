//! Deliberately naive reference implementations.
//!
//! Everything here expands spectra entry by entry and applies textbook
//! definitions literally. The grouped algorithms are validated against these
//! on small instances; the CLI can rerun a check through them with
//! `--oracle`. Size guards keep the exponential blowup from ever being
//! attempted by accident.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::rational::Rational;
use crate::spectrum::{GroupedSpectrum, SchmidtSpectrum};
use crate::{Error, Result};

/// Ceiling on the number of expanded entries any oracle computation may
/// produce.
pub const SIZE_GUARD: u64 = 10_000_000;

/// A fully expanded spectrum: descending rationals, repeats allowed, sum
/// exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSpectrum {
    probs: Vec<Rational>,
}

impl DenseSpectrum {
    /// Validates and sorts, with the same rules as [`SchmidtSpectrum::new`].
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        let s = SchmidtSpectrum::new(probs)?;
        Ok(Self {
            probs: s.probs().to_vec(),
        })
    }

    /// Expands a grouped spectrum entry by entry, guarded.
    pub fn from_grouped(g: &GroupedSpectrum) -> Result<Self> {
        let dim = g.total_dimension();
        if dim > BigUint::from(SIZE_GUARD) {
            return Err(Error::SizeGuardExceeded {
                size: dim.to_string(),
                guard: SIZE_GUARD,
            });
        }
        let mut probs = Vec::new();
        for (v, m) in g.groups() {
            let mut left = m.clone();
            while !left.is_zero() {
                probs.push(v.clone());
                left -= 1u32;
            }
        }
        Ok(Self { probs })
    }

    pub fn from_spectrum(s: &SchmidtSpectrum) -> Self {
        Self {
            probs: s.probs().to_vec(),
        }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn to_grouped(&self) -> GroupedSpectrum {
        SchmidtSpectrum::new(self.probs.clone())
            .expect("dense spectrum is already valid")
            .to_grouped()
    }
}

/// m-fold Cartesian product of a dense spectrum with itself, sorted
/// descending. Guarded: |s|^m must stay within [`SIZE_GUARD`].
pub fn naive_tensor_power(s: &DenseSpectrum, m: u32) -> Result<DenseSpectrum> {
    if m == 0 {
        return Err(Error::ZeroPower);
    }
    let size = BigUint::from(s.probs.len()).pow(m);
    if size > BigUint::from(SIZE_GUARD) {
        return Err(Error::SizeGuardExceeded {
            size: size.to_string(),
            guard: SIZE_GUARD,
        });
    }
    let mut probs = s.probs.clone();
    for _ in 1..m {
        let mut next = Vec::with_capacity(probs.len() * s.probs.len());
        for p in &probs {
            for q in &s.probs {
                next.push(p * q);
            }
        }
        probs = next;
    }
    probs.sort_unstable_by(|x, y| y.cmp(x));
    Ok(DenseSpectrum { probs })
}

/// Literal majorization test: compares the l largest-entry sums for every
/// l up to the smaller dimension. True iff a is majorized by b.
pub fn naive_majorizes(a: &DenseSpectrum, b: &DenseSpectrum) -> bool {
    let lim = a.probs.len().min(b.probs.len());
    let mut sa = Rational::zero();
    let mut sb = Rational::zero();
    for l in 0..lim {
        sa += &a.probs[l];
        sb += &b.probs[l];
        if sa > sb {
            return false;
        }
    }
    true
}
