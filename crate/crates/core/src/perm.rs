//! Permutations on `{0, …, degree-1}` with exact cycle data.
//!
//! Composition is left-to-right: `x^(g·h) = (x^g)^h`, so `g.then(h)` applies
//! `g` first. Points are 0-indexed everywhere; the 1-indexed display form of
//! cycles is a formatting concern only.

use crate::error::{Error, Result};
use std::fmt;

pub type Point = u32;

/// The triple `(n(g), s(g), o(g))`: number of cycles (fixed points count as
/// 1-cycles), number of fixed points, and element order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleStats {
    pub cycle_count: u32,
    pub fixed_points: u32,
    pub element_order: u128,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<Point>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if (p as usize) >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {p} out of range for degree {n}"
                )));
            }
            if seen[p as usize] {
                return Err(Error::InvalidPermutation(format!("image {p} repeated")));
            }
            seen[p as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as Point == p)
    }

    /// `self` then `other`: `x^(self·other) = (x^self)^other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&p| other.images[p as usize]).collect(),
        }
    }

    /// In-place variant of [`then`](Self::then): `self := self · other`.
    pub fn compose_in_place(&mut self, other: &Permutation) {
        debug_assert_eq!(self.degree(), other.degree());
        for p in &mut self.images {
            *p = other.images[*p as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0 as Point; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p as usize] = i as Point;
        }
        Permutation { images: inv }
    }

    /// `x^{-1} · self · x`.
    pub fn conjugated_by(&self, x: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), x.degree());
        let mut out = vec![0 as Point; self.images.len()];
        for i in 0..self.images.len() {
            out[x.images[i] as usize] = x.images[self.images[i] as usize];
        }
        Permutation { images: out }
    }

    /// `self^{-1} · other^{-1} · self · other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc.compose_in_place(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact order as the lcm of cycle lengths; errors on 128-bit overflow.
    pub fn order(&self) -> Result<u128> {
        Ok(self.cycle_stats()?.element_order)
    }

    pub fn cycle_stats(&self) -> Result<CycleStats> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = 0u32;
        let mut fixed = 0u32;
        let mut order: u128 = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut len = 0u128;
            let mut x = start;
            loop {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
                if x == start {
                    break;
                }
            }
            if len == 1 {
                fixed += 1;
            }
            order = lcm_u128(order, len).ok_or(Error::OrderOverflow)?;
        }
        Ok(CycleStats {
            cycle_count: cycles,
            fixed_points: fixed,
            element_order: order,
        })
    }

    /// Nontrivial cycles, each rotated to start at its smallest point and the
    /// list sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            loop {
                seen[x] = true;
                cyc.push(x as Point);
                x = self.images[x] as usize;
                if x == start {
                    break;
                }
            }
            out.push(cyc);
        }
        out
    }

    pub fn min_moved_point(&self) -> Option<Point> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &p)| *i as Point != p)
            .map(|(i, _)| i as Point)
    }

    /// Image of a subset given as a bitmask; degree must be at most 64.
    pub fn image_of_mask(&self, mask: u64) -> u64 {
        debug_assert!(self.degree() <= 64);
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros();
            out |= 1u64 << self.images[i as usize];
            m &= m - 1;
        }
        out
    }

    /// Parses the whitespace-separated image list form, e.g. `"1 0 2 3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let images: std::result::Result<Vec<Point>, _> =
            text.split_whitespace().map(str::parse::<Point>).collect();
        let images =
            images.map_err(|e| Error::InvalidPermutation(format!("bad image list: {e}")))?;
        if images.is_empty() {
            return Err(Error::InvalidPermutation("empty image list".into()));
        }
        Self::from_images(images)
    }

    /// The whitespace-separated image list form used by catalog files.
    pub fn to_text(&self) -> String {
        self.images
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, p) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub(crate) fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd_u128(a, b)).checked_mul(b)
}
