//! GF(p^k) arithmetic with the lexicographically least monic irreducible
//! modulus. Elements are encoded as integers in `{0, …, p^k-1}` by base-p
//! digits of the coefficient vector, constant term least significant.

use crate::error::{Error, Result};

/// Maximum number of field points.
pub const FIELD_SIZE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    characteristic: u64,
    extension_degree: u32,
    /// Monic modulus as coefficients `c_0, …, c_k` with `c_k = 1`.
    modulus: Vec<u64>,
    size: u64,
    primitive_element: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// Polynomial helpers over GF(p); coefficient vectors, constant term first,
// no trailing zeros (the zero polynomial is an empty vector).

fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(prod, modulus, p)
}

fn poly_rem(mut v: Vec<u64>, modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    while v.len() > k {
        let lead = *v.last().unwrap() % p;
        let deg = v.len() - 1;
        if lead != 0 {
            for i in 0..=k {
                let idx = deg - k + i;
                v[idx] = (v[idx] + (p - lead) * modulus[i] % p) % p;
            }
        }
        v.pop();
    }
    poly_trim(v)
}

fn poly_pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base.to_vec(), modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        // a mod b via scaling b monic.
        let inv_lead = mod_inverse(*b.last().unwrap(), p);
        let monic: Vec<u64> = b.iter().map(|&c| c * inv_lead % p).collect();
        let r = poly_rem(a, &monic, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p prime and a != 0 mod p.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Irreducibility over GF(p) of a monic polynomial:
/// `x^{p^k} ≡ x (mod f)` and `gcd(x^{p^{k/ℓ}} - x, f) = 1` for primes `ℓ | k`.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = (modulus.len() - 1) as u32;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^j) mod f by iterated p-th powers.
    let frobenius_power = |j: u32| -> Vec<u64> {
        let mut cur = x.clone();
        for _ in 0..j {
            cur = poly_pow_mod(&cur, p, modulus, p);
        }
        cur
    };
    let xpk = frobenius_power(k);
    if poly_trim(sub_poly(&xpk, &x, p)) != Vec::<u64>::new() {
        return false;
    }
    for (l, _) in factor_u64(k as u64) {
        let xp = frobenius_power(k / l as u32);
        let diff = poly_trim(sub_poly(&xp, &x, p));
        let g = poly_gcd(modulus.to_vec(), diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn sub_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let ai = a.get(i).copied().unwrap_or(0);
        let bi = b.get(i).copied().unwrap_or(0);
        out[i] = (ai + p - bi) % p;
    }
    out
}

impl FieldSpec {
    /// Builds GF(p^k) with the lexicographically smallest monic irreducible
    /// modulus (coefficients compared from the constant term up).
    pub fn new(p: u64, k: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let size = match (p as u128).checked_pow(k) {
            Some(s) if s <= FIELD_SIZE_CAP as u128 => s as u64,
            Some(s) => return Err(Error::SizeCap(s.min(u64::MAX as u128) as u64, FIELD_SIZE_CAP)),
            None => return Err(Error::SizeCap(u64::MAX, FIELD_SIZE_CAP)),
        };
        let modulus = if k == 1 {
            vec![0, 1] // x: the prime field itself
        } else {
            Self::least_irreducible(p, k)?
        };
        let mut field = FieldSpec {
            characteristic: p,
            extension_degree: k,
            modulus,
            size,
            primitive_element: 0,
        };
        field.primitive_element = field.find_primitive_element()?;
        Ok(field)
    }

    /// Lexicographic scan over `(c_0, …, c_{k-1})`, constant term most
    /// significant, for the first irreducible monic polynomial.
    fn least_irreducible(p: u64, k: u32) -> Result<Vec<u64>> {
        let total = (p as u128).pow(k);
        for m in 0..total {
            let mut coeffs = vec![0u64; k as usize + 1];
            coeffs[k as usize] = 1;
            let mut rem = m;
            // c_0 is the most significant digit of the scan counter so that
            // candidates are visited in constant-term-first lex order.
            for i in 0..k as usize {
                let place = (p as u128).pow(k - 1 - i as u32);
                coeffs[i] = (rem / place) as u64;
                rem %= place;
            }
            if is_irreducible(&coeffs, p) {
                return Ok(coeffs);
            }
        }
        Err(Error::Internal(format!(
            "no irreducible polynomial of degree {k} over GF({p})"
        )))
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn extension_degree(&self) -> u32 {
        self.extension_degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u64 {
        self.primitive_element
    }

    fn to_poly(&self, mut x: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while x > 0 {
            out.push(x % self.characteristic);
            x /= self.characteristic;
        }
        out
    }

    fn from_poly(&self, v: &[u64]) -> u64 {
        let mut out = 0u64;
        for &c in v.iter().rev() {
            out = out * self.characteristic + c;
        }
        out
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.characteristic;
        let mut out = 0u64;
        let mut place = 1u64;
        let (mut a, mut b) = (a, b);
        while a > 0 || b > 0 {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let p = self.characteristic;
        let mut out = 0u64;
        let mut place = 1u64;
        let mut a = a;
        while a > 0 {
            out += (p - a % p) % p * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let pa = self.to_poly(a);
        let pb = self.to_poly(b);
        self.from_poly(&poly_mul_mod(&pa, &pb, &self.modulus, self.characteristic))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Internal("inverse of zero".into()));
        }
        Ok(self.pow(a, self.size - 2))
    }

    /// Frobenius `x ↦ x^{p^j}`.
    pub fn frobenius(&self, a: u64, j: u32) -> u64 {
        let mut out = a;
        for _ in 0..(j % self.extension_degree) {
            out = self.pow(out, self.characteristic);
        }
        out
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Internal("order of zero".into()));
        }
        let n = self.size - 1;
        let mut ord = n;
        for (q, _) in factor_u64(n) {
            while ord % q == 0 && self.pow(a, ord / q) == 1 {
                ord /= q;
            }
        }
        Ok(ord)
    }

    fn find_primitive_element(&self) -> Result<u64> {
        if self.size == 2 {
            return Ok(1);
        }
        let n = self.size - 1;
        let factors = factor_u64(n);
        'outer: for g in 2..self.size {
            for (q, _) in &factors {
                if self.pow(g, n / q) == 1 {
                    continue 'outer;
                }
            }
            return Ok(g);
        }
        Err(Error::Internal("no primitive element found".into()))
    }

    /// Exhaustive field-axiom check over all element triples (intended for
    /// sizes up to 2^10); works on precomputed operation tables.
    pub fn check_axioms(&self) -> Result<()> {
        let q = self.size as usize;
        if q > 1024 {
            return Err(Error::SizeCap(self.size, 1024));
        }
        let mut mul = vec![0u16; q * q];
        let mut add = vec![0u16; q * q];
        for a in 0..q {
            for b in a..q {
                let m = self.mul(a as u64, b as u64) as u16;
                let s = self.add(a as u64, b as u64) as u16;
                mul[a * q + b] = m;
                mul[b * q + a] = m;
                add[a * q + b] = s;
                add[b * q + a] = s;
            }
        }
        // Commutativity holds by table symmetry; verify it directly against
        // the scalar routines on a full pass.
        for a in 0..q {
            for b in 0..q {
                if mul[a * q + b] as u64 != self.mul(b as u64, a as u64) {
                    return Err(Error::Internal(format!("commutativity fails at ({a},{b})")));
                }
            }
        }
        for a in 0..q {
            for b in 0..q {
                let ab_m = mul[a * q + b] as usize;
                let ab_s = add[a * q + b] as usize;
                for c in 0..q {
                    if mul[ab_m * q + c] != mul[a * q + mul[b * q + c] as usize] {
                        return Err(Error::Internal(format!(
                            "mul associativity fails at ({a},{b},{c})"
                        )));
                    }
                    if add[ab_s * q + c] != add[a * q + add[b * q + c] as usize] {
                        return Err(Error::Internal(format!(
                            "add associativity fails at ({a},{b},{c})"
                        )));
                    }
                    if mul[a * q + add[b * q + c] as usize]
                        != add[mul[a * q + b] as usize * q + mul[a * q + c] as usize]
                    {
                        return Err(Error::Internal(format!(
                            "distributivity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
            if a != 0 {
                let inv = self.inv(a as u64)?;
                if mul[a * q + inv as usize] != 1 {
                    return Err(Error::Internal(format!("inverse fails at {a}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_is_trivial_extension() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn gf9_multiplicative_group_is_cyclic_of_order_eight() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.size(), 9);
        // Brute-force check that some element has order 8.
        let mut found = false;
        for a in 1..9 {
            if f.multiplicative_order(a).unwrap() == 8 {
                found = true;
            }
        }
        assert!(found);
        assert_eq!(f.multiplicative_order(f.primitive_element()).unwrap(), 8);
    }

    #[test]
    fn gf64_has_unique_subgroup_of_order_nine() {
        let f = FieldSpec::new(2, 6).unwrap();
        assert_eq!(f.size(), 64);
        // Elements of multiplicative order dividing 9 form the unique
        // subgroup of order 9 of a cyclic group of order 63.
        let count = (1..64)
            .filter(|&a| {
                let o = f.multiplicative_order(a).unwrap();
                9 % o == 0
            })
            .count();
        assert_eq!(count, 9);
    }

    #[test]
    fn moduli_are_irreducible_and_least() {
        for (p, k) in [(2u64, 3u32), (3, 2), (2, 4), (5, 2)] {
            let f = FieldSpec::new(p, k).unwrap();
            assert!(is_irreducible(f.modulus(), p));
            assert_eq!(f.modulus().len(), k as usize + 1);
        }
    }

    #[test]
    fn small_field_axioms() {
        for (p, k) in [(2u64, 3u32), (3, 2), (5, 1), (7, 1), (2, 4)] {
            FieldSpec::new(p, k).unwrap().check_axioms().unwrap();
        }
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(matches!(FieldSpec::new(6, 1), Err(Error::NotPrime(6))));
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = FieldSpec::new(2, 6).unwrap();
        for a in 0..2 {
            assert_eq!(f.frobenius(a, 1), a);
        }
        // Frobenius is additive.
        for a in 0..64 {
            for b in 0..64 {
                assert_eq!(
                    f.frobenius(f.add(a, b), 1),
                    f.add(f.frobenius(a, 1), f.frobenius(b, 1))
                );
            }
        }
    }
}
