use super::{Field, FieldError};
use rand::Rng;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseKind {
    Prime,
    Binary,
}

/// Log/antilog tables for a binary field.
#[derive(Debug)]
struct GfTables {
    log: Vec<u32>,
    // exp is doubled so log(a) + log(b) never needs a reduction
    exp: Vec<u32>,
}

impl GfTables {
    fn build(s: u32, poly: u32) -> GfTables {
        let size = 1usize << s;
        let mul_slow = |mut a: u32, mut b: u32| -> u32 {
            let mut r = 0u32;
            while b != 0 {
                if b & 1 != 0 {
                    r ^= a;
                }
                b >>= 1;
                a <<= 1;
                if a & (1 << s) != 0 {
                    a ^= poly;
                }
            }
            r
        };
        // smallest element whose powers cover the multiplicative group
        let generator = (2..size as u32)
            .find(|&g| {
                let mut x = 1u32;
                for i in 1..size - 1 {
                    x = mul_slow(x, g);
                    if x == 1 && i < size - 1 {
                        return false;
                    }
                }
                true
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut log = vec![0u32; size];
        let mut exp = vec![0u32; 2 * size];
        let mut x = 1u32;
        for i in 0..size - 1 {
            exp[i] = x;
            exp[i + size - 1] = x;
            log[x as usize] = i as u32;
            x = mul_slow(x, generator);
        }
        GfTables { log, exp }
    }
}

fn tables_for(s: u32) -> &'static GfTables {
    static GF16: OnceLock<GfTables> = OnceLock::new();
    static GF256: OnceLock<GfTables> = OnceLock::new();
    static GF65536: OnceLock<GfTables> = OnceLock::new();
    match s {
        4 => GF16.get_or_init(|| GfTables::build(4, 0x13)),
        8 => GF256.get_or_init(|| GfTables::build(8, 0x11B)),
        16 => GF65536.get_or_init(|| GfTables::build(16, 0x1100B)),
        _ => unreachable!("unsupported binary field size"),
    }
}

/// A prime field `F_p` or a binary field `GF(2^s)`.
///
/// Elements are `u32` values in `0..order`. Binary fields use the fixed
/// reduction polynomials `x^4+x+1`, `x^8+x^4+x^3+x+1` and
/// `x^16+x^12+x^3+x+1` for `s = 4, 8, 16`.
#[derive(Clone)]
pub struct BaseField {
    kind: BaseKind,
    order: u32,
    reduction_poly: u32,
    tables: Option<&'static GfTables>,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.order == other.order && self.reduction_poly == other.reduction_poly
    }
}

impl Eq for BaseField {}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaseField({self})")
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BaseKind::Prime => write!(f, "prime:{}", self.order),
            BaseKind::Binary => write!(f, "gf2:{}", self.order.trailing_zeros()),
        }
    }
}

impl FromStr for BaseField {
    type Err = FieldError;

    /// Parses `prime:<p>` or `gf2:<s>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| FieldError::Descriptor(format!("expected prime:<p> or gf2:<s>, got {s:?}")))?;
        let value: u32 =
            value.trim().parse().map_err(|_| FieldError::Descriptor(format!("not an integer: {value:?}")))?;
        match kind.trim() {
            "prime" => BaseField::prime(value),
            "gf2" => BaseField::binary(value),
            other => Err(FieldError::Descriptor(format!("unknown field kind {other:?}"))),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseField {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(FieldError::Descriptor(format!("{p} is not a prime below 2^31")));
        }
        Ok(BaseField { kind: BaseKind::Prime, order: p, reduction_poly: 0, tables: None })
    }

    /// `GF(2^s)` for `s` in `{4, 8, 16}`.
    pub fn binary(s: u32) -> Result<Self, FieldError> {
        let reduction_poly = match s {
            4 => 0x13,
            8 => 0x11B,
            16 => 0x1100B,
            _ => return Err(FieldError::Descriptor(format!("gf2:{s} unsupported (use 4, 8 or 16)"))),
        };
        Ok(BaseField { kind: BaseKind::Binary, order: 1 << s, reduction_poly, tables: Some(tables_for(s)) })
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    /// `p` for prime fields, `2^s` for binary ones.
    pub fn size(&self) -> u32 {
        self.order
    }

    /// Reduction polynomial bitmask (binary kind only).
    pub fn reduction_poly(&self) -> Option<u32> {
        match self.kind {
            BaseKind::Binary => Some(self.reduction_poly),
            BaseKind::Prime => None,
        }
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.order
    }

    /// Canonical enumeration: `0, 1, 2, ...` as integers (prime) or bit
    /// patterns (binary).
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    /// Bits needed to store one element.
    pub fn symbol_bits(&self) -> u32 {
        32 - (self.order - 1).leading_zeros()
    }

    /// Whole payload bits one element can carry losslessly.
    pub fn data_bits(&self) -> u32 {
        31 - self.order.leading_zeros()
    }

    pub fn bytes_per_symbol(&self) -> usize {
        self.symbol_bits().div_ceil(8) as usize
    }
}

impl Field for BaseField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        match self.kind {
            BaseKind::Binary => a ^ b,
            BaseKind::Prime => {
                let s = *a as u64 + *b as u64;
                (s % self.order as u64) as u32
            }
        }
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        match self.kind {
            BaseKind::Binary => a ^ b,
            BaseKind::Prime => {
                let p = self.order as u64;
                ((*a as u64 + p - *b as u64) % p) as u32
            }
        }
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        match self.kind {
            BaseKind::Binary => *a,
            BaseKind::Prime => {
                if *a == 0 {
                    0
                } else {
                    self.order - a
                }
            }
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match self.kind {
            BaseKind::Prime => ((*a as u64 * *b as u64) % self.order as u64) as u32,
            BaseKind::Binary => {
                if *a == 0 || *b == 0 {
                    return 0;
                }
                let t = self.tables.expect("binary field tables");
                t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize]
            }
        }
    }

    fn inv(&self, a: &u32) -> Result<u32, FieldError> {
        if *a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        match self.kind {
            BaseKind::Prime => Ok(self.pow(a, self.order as u64 - 2)),
            BaseKind::Binary => {
                let t = self.tables.expect("binary field tables");
                let q1 = self.order - 1;
                Ok(t.exp[((q1 - t.log[*a as usize]) % q1) as usize])
            }
        }
    }

    fn characteristic(&self) -> u64 {
        match self.kind {
            BaseKind::Prime => self.order as u64,
            BaseKind::Binary => 2,
        }
    }

    fn order(&self) -> u128 {
        self.order as u128
    }

    fn integer(&self, v: u64) -> u32 {
        (v % self.characteristic()) as u32
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.order)
    }
}
