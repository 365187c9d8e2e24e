//! Table-driven arithmetic in F_{p^k}.
//!
//! Elements are encoded as integers in `[0, p^k)`: the base-p digits
//! (little-endian) are the coefficients of the residue polynomial modulo the
//! field's modulus. Multiplication goes through discrete log/exp tables with
//! respect to a fixed primitive element; addition uses a full table for small
//! fields, XOR in characteristic 2, and Zech logarithms otherwise.
//!
//! A field of even degree `k` is also viewed as F_{q^2} with `q = p^{k/2}`;
//! for those the conjugation `x -> x^q` and norm `x -> x^{q+1}` are tabulated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field the tables are built for.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const ADD_TABLE_MAX: u32 = 256;
const NO_LOG: u32 = u32::MAX;

/// An element of some [`Field`], by index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serialized identity of a field: `{"p": int, "k": int, "modulus": [int,...]}`.
///
/// `modulus` lists the coefficients low-degree first, including the leading 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Neg,
}

/// The finite field F_{p^k}. Immutable after construction.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    size: u32,
    modulus: Vec<u32>,
    generator: Elem,
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2 * order`, so sums of two logs need no reduction.
    exp: Vec<u32>,
    add_table: Option<Vec<u32>>,
    zech: Vec<u32>,
    neg: Vec<u32>,
    half_degree: Option<u32>,
    conj: Vec<u32>,
    norm: Vec<u32>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial helpers over F_p used only while building tables.
mod fp_poly {
    /// Remainder of `a` modulo the monic `m` (coefficients low-degree first).
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            if lead != 0 {
                for (i, &c) in m.iter().enumerate() {
                    let t = (lead as u64 * c as u64 % p as u64) as u32;
                    r[shift + i] = (r[shift + i] + p - t) % p;
                }
            }
            r.pop();
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        out
    }

    /// Monic polynomials of degree `deg` over F_p, coefficient vectors
    /// enumerated lexicographically with the constant term most significant.
    pub fn monic_of_degree(deg: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
        let total = (p as u64).pow(deg as u32);
        (0..total).map(move |mut n| {
            let mut coeffs = vec![0u32; deg + 1];
            coeffs[deg] = 1;
            // last digit of n is least significant, so coefficient 0 is most significant
            for i in (0..deg).rev() {
                coeffs[i] = (n % p as u64) as u32;
                n /= p as u64;
            }
            coeffs
        })
    }

    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            for f in monic_of_degree(d, p) {
                if rem(m, &f, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    /// Builds F_{p^k} with the lexicographically smallest monic irreducible
    /// modulus (coefficients compared low-degree first).
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::Precondition("extension degree must be positive".into()));
        }
        let size = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if size > MAX_FIELD_SIZE {
            return Err(Error::SizeBudgetExceeded(format!("{p}^{k} exceeds 2^20 elements")));
        }
        let modulus = fp_poly::monic_of_degree(k as usize, p)
            .find(|m| fp_poly::is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");
        Ok(Self::with_modulus(p, k, modulus))
    }

    /// Rebuilds a field from its serialized form, checking the modulus.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        let f = Field::new(spec.p, spec.k)?;
        if f.modulus != spec.modulus {
            return Err(Error::ModulusMismatch { expected: f.modulus.clone(), found: spec.modulus.clone() });
        }
        Ok(f)
    }

    /// F_{q^2} for a prime power `q`.
    pub fn quadratic(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
        Field::new(p, 2 * e)
    }

    fn with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> Field {
        let size = p.pow(k);
        let digits = |mut x: u32| -> Vec<u32> {
            let mut d = vec![0u32; k as usize];
            for c in d.iter_mut() {
                *c = x % p;
                x /= p;
            }
            d
        };
        let pack = |d: &[u32]| -> u32 { d.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let mulmod = |a: u32, b: u32| -> u32 {
            let prod = fp_poly::mul(&digits(a), &digits(b), p);
            let mut r = fp_poly::rem(&prod, &modulus, p);
            r.resize(k as usize, 0);
            pack(&r)
        };
        let digit_add = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            pack(&s)
        };

        let order = size - 1;
        let generator = if size == 2 {
            1
        } else {
            let factors = prime_factors(order);
            (2..size)
                .find(|&g| {
                    factors.iter().all(|&r| {
                        let mut e = order / r;
                        let mut base = g;
                        let mut acc = 1u32;
                        while e > 0 {
                            if e & 1 == 1 {
                                acc = mulmod(acc, base);
                            }
                            base = mulmod(base, base);
                            e >>= 1;
                        }
                        acc != 1
                    })
                })
                .expect("multiplicative group is cyclic")
        };

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            log[x as usize] = i;
            x = mulmod(x, generator);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }

        let mut neg = vec![0u32; size as usize];
        for (x, n) in neg.iter_mut().enumerate() {
            let d: Vec<u32> = digits(x as u32).iter().map(|&c| (p - c) % p).collect();
            *n = pack(&d);
        }

        let mut zech = vec![NO_LOG; order as usize];
        for n in 0..order {
            let s = digit_add(1, exp[n as usize]);
            zech[n as usize] = log[s as usize];
        }

        let add_table = (size <= ADD_TABLE_MAX).then(|| {
            let mut t = vec![0u32; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    t[(a * size + b) as usize] = digit_add(a, b);
                }
            }
            t
        });

        let mut field = Field {
            p,
            k,
            size,
            modulus,
            generator: Elem(generator),
            log,
            exp,
            add_table,
            zech,
            neg,
            half_degree: None,
            conj: Vec::new(),
            norm: Vec::new(),
        };
        if k % 2 == 0 {
            let q = p.pow(k / 2);
            field.half_degree = Some(k / 2);
            field.conj = (0..size).map(|x| field.pow(Elem(x), q as u64).0).collect();
            field.norm = (0..size).map(|x| field.pow(Elem(x), q as u64 + 1).0).collect();
        }
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.size - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, k: self.k, modulus: self.modulus.clone() }
    }

    /// `q` when this field is viewed as F_{q^2}.
    pub fn q(&self) -> Result<u32> {
        self.half_degree.map(|h| self.p.pow(h)).ok_or(Error::OddExtension(self.k))
    }

    pub fn element(&self, index: u32) -> Result<Elem> {
        if index < self.size {
            Ok(Elem(index))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// The prime-field element `n mod p`.
    pub fn from_int(&self, n: u64) -> Elem {
        Elem((n % self.p as u64) as u32)
    }

    /// Base-p digits of the element, i.e. its coordinates in the polynomial basis.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.k)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(Elem)
    }

    /// Discrete log w.r.t. the fixed generator, `None` for zero.
    #[inline]
    pub fn log(&self, x: Elem) -> Option<u32> {
        let l = self.log[x.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    #[inline]
    pub fn log_raw(&self, x: Elem) -> u32 {
        self.log[x.0 as usize]
    }

    /// `g^e` for `e < 2 * order`.
    #[inline]
    pub fn exp_raw(&self, e: u32) -> Elem {
        Elem(self.exp[e as usize])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.add_table {
            return Elem(t[(a.0 * self.size + b.0) as usize]);
        }
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let order = self.size - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let n = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[n as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size - 1;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let order = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.exp[((l * (e % order)) % order) as usize])
    }

    /// Checked arithmetic entry point: validates membership and zero division.
    pub fn arith(&self, op: ArithOp, x: Elem, y: Elem) -> Result<Elem> {
        self.element(x.0)?;
        self.element(y.0)?;
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Inv => self.inv(x)?,
            ArithOp::Neg => self.neg(x),
        })
    }

    /// `x^q` on F_{q^2}.
    pub fn conjugate(&self, x: Elem) -> Result<Elem> {
        if self.half_degree.is_none() {
            return Err(Error::OddExtension(self.k));
        }
        Ok(Elem(self.conj[x.0 as usize]))
    }

    /// `x^{q+1}` on F_{q^2}; the value lies in F_q.
    pub fn norm(&self, x: Elem) -> Result<Elem> {
        if self.half_degree.is_none() {
            return Err(Error::OddExtension(self.k));
        }
        Ok(Elem(self.norm[x.0 as usize]))
    }

    /// Unchecked conjugation for hot loops; the field must have even degree.
    #[inline]
    pub fn conj_fast(&self, x: Elem) -> Elem {
        Elem(self.conj[x.0 as usize])
    }

    #[inline]
    pub fn norm_fast(&self, x: Elem) -> Elem {
        Elem(self.norm[x.0 as usize])
    }

    /// Whether `x` lies in the subfield F_q.
    pub fn in_subfield(&self, x: Elem) -> Result<bool> {
        Ok(self.conjugate(x)? == x)
    }

    /// All `y` with `y^{q+1} = a`, by exhaustive scan.
    pub fn norm_preimages(&self, a: Elem) -> Result<Vec<Elem>> {
        self.q()?;
        Ok(self.elements().filter(|&y| self.norm_fast(y) == a).collect())
    }

    /// Embedding of this field into `big`: the image of every element, by index.
    ///
    /// Sends the polynomial generator `t` to the first root (in index order)
    /// of this field's modulus in `big`.
    pub fn embedding_into(&self, big: &Field) -> Result<Vec<Elem>> {
        if big.p != self.p || big.k % self.k != 0 {
            return Err(Error::NotEmbeddable { small: self.size, large: big.size });
        }
        let eval = |x: Elem| -> Elem {
            self.modulus
                .iter()
                .rev()
                .fold(Elem::ZERO, |acc, &c| big.add(big.mul(acc, x), Elem(c)))
        };
        let root = big.elements().find(|&x| eval(x).is_zero()).ok_or(Error::NotEmbeddable {
            small: self.size,
            large: big.size,
        })?;
        let powers: Vec<Elem> = (0..self.k).map(|i| big.pow(root, i as u64)).collect();
        Ok(self
            .elements()
            .map(|x| {
                self.digits(x)
                    .iter()
                    .zip(&powers)
                    .fold(Elem::ZERO, |acc, (&d, &pw)| big.add(acc, big.mul(Elem(d), pw)))
            })
            .collect())
    }
}

/// Decomposes `q = p^e`; `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}
