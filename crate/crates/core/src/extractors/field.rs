use crate::error::Error;
use crate::Result;

/// GF(p^k) with log/exp tables, for small orders.
///
/// Elements are encoded as integers `0..q` whose base-`p` digits are the
/// polynomial coefficients, constant term first. For `p = 2` addition is XOR.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Largest supported field order.
const MAX_ORDER: u32 = 1 << 16;

impl GaloisField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::param(format!("{q} is not a prime power")))?;
        if q > MAX_ORDER {
            return Err(Error::param(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        let modulus = primitive_poly(p, k);
        let mut exp = Vec::with_capacity(2 * (q as usize - 1));
        let mut log = vec![0u32; q as usize];
        let mut z = vec![0u32; k as usize];
        z[0] = 1;
        for i in 0..q - 1 {
            let e = encode(&z, p);
            exp.push(e);
            log[e as usize] = i;
            mul_x(&mut z, &modulus, p);
        }
        exp.extend_from_within(..);
        Ok(Self { p, k, q, exp, log })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// The primitive element `x`.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    /// Evaluates the polynomial with the given coefficients (constant first).
    pub fn eval(&self, coeffs: &[u32], at: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, at), c))
    }
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub(crate) fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn encode(z: &[u32], p: u32) -> u32 {
    z.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// `z <- z * x mod f` where `f` is monic of degree `z.len()`, given by its
/// lower coefficients.
fn mul_x(z: &mut [u32], f: &[u32], p: u32) {
    let top = *z.last().expect("non-empty");
    for i in (1..z.len()).rev() {
        z[i] = z[i - 1];
    }
    z[0] = 0;
    for (zi, &fi) in z.iter_mut().zip(f) {
        *zi = (*zi + (p - fi) * top) % p;
    }
}

fn x_pow(e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut z = vec![0u32; f.len()];
    z[0] = 1;
    // square-and-multiply is overkill at these sizes; `e < 2^16`
    for _ in 0..e {
        mul_x(&mut z, f, p);
    }
    z
}

/// Lowest monic primitive polynomial of degree `k` over GF(p), returned as
/// its lower `k` coefficients. For `k = 1` this is `x - g` for the smallest
/// generator `g` of GF(p)*.
fn primitive_poly(p: u32, k: u32) -> Vec<u32> {
    let q = (p as u64).pow(k);
    let order = q - 1;
    let factors = prime_factors(order);
    let count = q;
    for code in 0..count {
        let mut f = vec![0u32; k as usize];
        let mut c = code;
        for fi in f.iter_mut() {
            *fi = (c % p as u64) as u32;
            c /= p as u64;
        }
        if f[0] == 0 {
            continue;
        }
        let one = {
            let mut v = vec![0u32; k as usize];
            v[0] = 1;
            v
        };
        if x_pow(order, &f, p) != one {
            continue;
        }
        if factors.iter().all(|r| x_pow(order / r, &f, p) != one) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
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
