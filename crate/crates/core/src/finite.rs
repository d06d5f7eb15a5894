//! Residue fields F_{p^f} and small polynomial helpers over F_p.

/// Dense polynomial over F_p, coefficients low to high, no trailing zeros.
pub type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn fp_poly_rem(a: &[u64], m: &[u64], p: u64) -> FpPoly {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        for i in 0..=dm {
            let idx = top - dm + i;
            r[idx] = (r[idx] + p - c * m[i] % p) % p;
        }
        r = trim(r);
    }
    r
}

pub fn fp_poly_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub fn fp_poly_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = fp_poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&l) = x.last() {
        let li = inv_mod(l, p);
        for c in x.iter_mut() {
            *c = *c * li % p;
        }
    }
    x
}

/// Ben-Or irreducibility test for a monic polynomial over F_p.
pub fn fp_poly_is_irreducible(h: &[u64], p: u64) -> bool {
    let h = trim(h.to_vec());
    let d = h.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        xp = fp_poly_pow_mod(&xp, p, &h, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        if fp_poly_gcd(&h, &trim(diff), p).len() > 1 {
            return false;
        }
    }
    true
}

pub fn fp_poly_pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> FpPoly {
    let mut base = fp_poly_rem(a, m, p);
    let mut acc = fp_poly_rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_poly_rem(&fp_poly_mul(&acc, &base, p), m, p);
        }
        base = fp_poly_rem(&fp_poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

/// F_q = F_p[t]/(hbar), elements as coordinate vectors of length f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u64,
    pub f: usize,
    hbar: FpPoly,
}

impl ResidueField {
    /// `hbar` must be monic and irreducible of degree f over F_p.
    pub fn new(p: u64, hbar: FpPoly) -> Self {
        let hbar = trim(hbar);
        let f = hbar.len() - 1;
        ResidueField { p, f, hbar }
    }

    pub fn prime_field(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.f]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn pad(&self, mut a: FpPoly) -> Vec<u64> {
        a.resize(self.f, 0);
        a
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let prod = fp_poly_mul(&trim(a.to_vec()), &trim(b.to_vec()), self.p);
        self.pad(fp_poly_rem(&prod, &self.hbar, self.p))
    }

    pub fn pow(&self, a: &[u64], e: u64) -> Vec<u64> {
        self.pad(fp_poly_pow_mod(&trim(a.to_vec()), e, &self.hbar, self.p))
    }

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// All q elements, in base-p digit order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.order())
            .map(|mut n| {
                let mut v = vec![0; self.f];
                for c in v.iter_mut() {
                    *c = n % self.p;
                    n /= self.p;
                }
                v
            })
            .collect()
    }
}
