use super::linalg;
use super::poly::{self, find_irreducible, is_irreducible};
use super::{BaseField, Field, FieldError, Matrix};
use rand::Rng;
use std::fmt;

/// An element of an [`ExtField`]: coefficients of `1, ω, ..., ω^(e-1)` over
/// the base field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    coeffs: Vec<u32>,
}

impl ExtElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `base[x] / (modulus)`, with `ω` the class of `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtField {
    base: BaseField,
    modulus: Vec<u32>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtField({} / {})", self.base, self.modulus_string())
    }
}

impl ExtField {
    /// Builds the extension for an explicit monic irreducible modulus given
    /// constant term first.
    pub fn new(base: BaseField, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let modulus = poly::trim(modulus);
        let degree = match poly::degree(&modulus) {
            Some(d) if d >= 1 => d,
            _ => return Err(FieldError::Modulus("degree must be at least 1".into())),
        };
        if modulus[degree] != 1 {
            return Err(FieldError::Modulus("leading coefficient must be 1".into()));
        }
        if let Some(c) = modulus.iter().find(|&&c| !base.contains(c)) {
            return Err(FieldError::Modulus(format!("coefficient {c} outside {base}")));
        }
        if !is_irreducible(&base, &modulus) {
            return Err(FieldError::Modulus(format!("reducible over {base}")));
        }
        let field = ExtField { base, modulus };
        let md = field.generator_min_poly_degree();
        if md != degree {
            return Err(FieldError::Modulus(format!(
                "generator has minimal polynomial degree {md}, expected {degree}"
            )));
        }
        Ok(field)
    }

    /// The extension of the given degree whose modulus is the first monic
    /// irreducible in [`find_irreducible`]'s scan order.
    pub fn with_degree(base: BaseField, degree: usize) -> Self {
        let modulus = find_irreducible(&base, degree);
        ExtField::new(base, modulus).expect("find_irreducible returns an irreducible modulus")
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Monic modulus, constant term first, length `degree + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Comma-separated modulus coefficients, constant term first.
    pub fn modulus_string(&self) -> String {
        self.modulus.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_modulus(s: &str) -> Result<Vec<u32>, FieldError> {
        s.split(',')
            .map(|t| {
                t.trim().parse::<u32>().map_err(|_| FieldError::Descriptor(format!("bad modulus coefficient {t:?}")))
            })
            .collect()
    }

    /// Wraps a coefficient vector, checking length and coefficient range.
    pub fn elem(&self, coeffs: Vec<u32>) -> Result<ExtElem, FieldError> {
        if coeffs.len() != self.degree() {
            return Err(FieldError::Mismatch(format!("expected {} coefficients, got {}", self.degree(), coeffs.len())));
        }
        if let Some(c) = coeffs.iter().find(|&&c| !self.base.contains(c)) {
            return Err(FieldError::Mismatch(format!("coefficient {c} outside {}", self.base)));
        }
        Ok(ExtElem { coeffs })
    }

    /// Embeds a base-field element.
    pub fn from_base(&self, c: u32) -> ExtElem {
        let mut coeffs = vec![0u32; self.degree()];
        coeffs[0] = c;
        ExtElem { coeffs }
    }

    /// The distinguished generator `ω`.
    pub fn generator(&self) -> ExtElem {
        self.reduce(&[0, 1])
    }

    pub fn omega_pow(&self, exp: u64) -> ExtElem {
        self.pow(&self.generator(), exp)
    }

    fn reduce(&self, p: &[u32]) -> ExtElem {
        let r = poly::rem(&self.base, p, &self.modulus);
        let mut coeffs = vec![0u32; self.degree()];
        coeffs[..r.len()].copy_from_slice(&r);
        ExtElem { coeffs }
    }

    /// Degree of the minimal polynomial of `ω` over the base field, i.e. the
    /// number of linearly independent powers `1, ω, ω², ...`.
    pub fn generator_min_poly_degree(&self) -> usize {
        let e = self.degree();
        let w = self.generator();
        let mut cur = self.one();
        let mut rows = Vec::with_capacity(e + 1);
        for _ in 0..=e {
            rows.push(cur.coeffs.clone());
            cur = self.mul(&cur, &w);
        }
        let m = Matrix::from_rows(rows);
        linalg::rank(&self.base, &m)
    }

    /// Multiplication with operand validation.
    pub fn try_mul(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem, FieldError> {
        self.elem(a.coeffs.clone())?;
        self.elem(b.coeffs.clone())?;
        Ok(self.mul(a, b))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on
    /// polynomials.
    pub fn ext_inv(&self, a: &ExtElem) -> Result<ExtElem, FieldError> {
        let f = &self.base;
        let a_poly = poly::trim(a.coeffs.clone());
        if a_poly.is_empty() {
            return Err(FieldError::ZeroInverse);
        }
        // invariant: s_i * a ≡ r_i (mod modulus)
        let (mut r0, mut r1) = (self.modulus.clone(), a_poly);
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = poly::divrem(f, &r0, &r1);
            let s = poly::sub(f, &s0, &poly::mul(f, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant because the modulus is irreducible
        debug_assert_eq!(poly::degree(&r0), Some(0));
        let c = f.inv(&r0[0])?;
        let s: Vec<u32> = s0.iter().map(|x| f.mul(x, &c)).collect();
        Ok(self.reduce(&s))
    }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem { coeffs: vec![0; self.degree()] }
    }

    fn one(&self) -> ExtElem {
        self.from_base(1)
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        debug_assert_eq!(a.coeffs.len(), b.coeffs.len());
        ExtElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.add(x, y)).collect() }
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        debug_assert_eq!(a.coeffs.len(), b.coeffs.len());
        ExtElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.sub(x, y)).collect() }
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem { coeffs: a.coeffs.iter().map(|x| self.base.neg(x)).collect() }
    }

    /// Schoolbook product followed by one reduction pass against the monic
    /// modulus.
    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let e = self.degree();
        debug_assert_eq!(a.coeffs.len(), e);
        debug_assert_eq!(b.coeffs.len(), e);
        let f = &self.base;
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if *y != 0 {
                    let t = f.mul(x, y);
                    prod[i + j] = f.add(&prod[i + j], &t);
                }
            }
        }
        for i in (e..2 * e - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            // x^i = x^(i-e) * x^e ≡ -x^(i-e) * (modulus - x^e)
            for j in 0..e {
                let t = f.mul(&c, &self.modulus[j]);
                prod[i - e + j] = f.sub(&prod[i - e + j], &t);
            }
        }
        prod.truncate(e);
        ExtElem { coeffs: prod }
    }

    fn inv(&self, a: &ExtElem) -> Result<ExtElem, FieldError> {
        self.ext_inv(a)
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn order(&self) -> u128 {
        (self.base.size() as u128).checked_pow(self.degree() as u32).unwrap_or(u128::MAX)
    }

    fn integer(&self, v: u64) -> ExtElem {
        self.from_base(self.base.integer(v))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        ExtElem { coeffs: (0..self.degree()).map(|_| self.base.random(rng)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> ExtField {
        ExtField::new(BaseField::prime(2).unwrap(), vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn gf4_small_products() {
        let f = f4();
        let w = f.generator();
        let one = f.one();
        assert_eq!(f.mul(&one, &w), w);
        // ω·ω = ω + 1
        assert_eq!(f.mul(&w, &w), f.elem(vec![1, 1]).unwrap());
        // ω·(ω + 1) = 1
        assert_eq!(f.mul(&w, &f.elem(vec![1, 1]).unwrap()), one);
        assert_eq!(f.inv(&one).unwrap(), one);
        assert_eq!(f.inv(&w).unwrap(), f.elem(vec![1, 1]).unwrap());
        assert_eq!(f.inv(&f.zero()), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn rejects_bad_moduli_and_elements() {
        let b = BaseField::prime(2).unwrap();
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(ExtField::new(b.clone(), vec![1, 0, 1]).is_err());
        assert!(ExtField::new(b.clone(), vec![1]).is_err());
        let f = f4();
        assert!(f.elem(vec![1, 0, 0]).is_err());
        assert!(f.elem(vec![2, 0]).is_err());
        let other = ExtField::with_degree(b, 3);
        assert!(f.try_mul(&f.one(), &other.one()).is_err());
        assert!(f.try_mul(&f.one(), &f.generator()).is_ok());
    }

    #[test]
    fn generator_has_full_degree() {
        for (base, e) in
            [(BaseField::prime(7).unwrap(), 4), (BaseField::prime(13).unwrap(), 9), (BaseField::binary(8).unwrap(), 5)]
        {
            let f = ExtField::with_degree(base, e);
            assert_eq!(f.generator_min_poly_degree(), e);
        }
    }

    #[test]
    fn field_axioms_on_random_samples() {
        let fields = [
            ExtField::with_degree(BaseField::prime(7).unwrap(), 4),
            ExtField::with_degree(BaseField::prime(13).unwrap(), 6),
            ExtField::with_degree(BaseField::binary(8).unwrap(), 4),
            ExtField::with_degree(BaseField::binary(4).unwrap(), 3),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for f in &fields {
            for _ in 0..10_000 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                let c = f.random(&mut rng);
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                assert_eq!(f.add(&f.sub(&a, &b), &b), a);
                if !f.is_zero(&a) {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = ExtField::with_degree(BaseField::prime(5).unwrap(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            assert_eq!(f.pow(&f.add(&a, &b), 5), f.add(&f.pow(&a, 5), &f.pow(&b, 5)));
        }
        // ω^(q^e) = ω
        assert_eq!(f.pow(&f.generator(), 125), f.generator());
    }
}
