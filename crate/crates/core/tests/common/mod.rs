//! A deliberately naive model of the curve over `F_p` with machine-word
//! arithmetic. It shares no code with the library, so agreement between
//! the two is evidence rather than tautology.

#![allow(dead_code)]

pub type Pt = (u64, u64);

#[derive(Clone, Copy, Debug)]
pub struct Model {
    pub p: u64,
    pub c: u64,
    pub d: u64,
    pub t: Option<u64>,
}

impl Model {
    pub fn general(p: u64, c: u64, d: u64) -> Self {
        Self { p, c: c % p, d: d % p, t: None }
    }

    pub fn rescaled(p: u64, t: u64) -> Self {
        Self {
            p,
            c: 1,
            d: t * t % p,
            t: Some(t % p),
        }
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    /// Euler's criterion, with 0 counted as a square.
    pub fn is_square(&self, a: u64) -> bool {
        a % self.p == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }

    fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn e(&self, (x, y): Pt) -> u64 {
        let p = self.p;
        let (x2, y2) = (x * x % p, y * y % p);
        (x2 + self.c * y2 % p + 2 * p - 1 - self.d * x2 % p * y2 % p) % p
    }

    /// Brute-force scan of all `p²` pairs, in `(x, y)` order.
    pub fn points(&self) -> Vec<Pt> {
        let mut v = Vec::new();
        for x in 0..self.p {
            for y in 0..self.p {
                if self.e((x, y)) == 0 {
                    v.push((x, y));
                }
            }
        }
        v
    }

    pub fn is_oo(&self, (x, y): Pt) -> bool {
        x != 0 && y != 0
    }

    pub fn delta0(&self, a: Pt, b: Pt) -> u64 {
        let p = self.p;
        let m = self.d * a.0 % p * a.1 % p * b.0 % p * b.1 % p;
        (1 + p - m) % p * ((1 + m) % p) % p
    }

    pub fn delta1(&self, a: Pt, b: Pt) -> u64 {
        let p = self.p;
        let dx = (b.0 * a.1 % p + p - a.0 * b.1 % p) % p;
        let dy = (a.0 * b.0 + a.1 * b.1) % p;
        dx * dy % p
    }

    pub fn add0(&self, a: Pt, b: Pt) -> Option<Pt> {
        let p = self.p;
        let m = self.d * a.0 % p * a.1 % p * b.0 % p * b.1 % p;
        let (dm, dp) = ((1 + p - m) % p, (1 + m) % p);
        if dm == 0 || dp == 0 {
            return None;
        }
        let nx = (a.0 * b.0 % p + p - self.c * a.1 % p * b.1 % p) % p;
        let ny = (a.0 * b.1 + a.1 * b.0) % p;
        Some((nx * self.inv(dm) % p, ny * self.inv(dp) % p))
    }

    pub fn add1(&self, a: Pt, b: Pt) -> Option<Pt> {
        let p = self.p;
        let dx = (b.0 * a.1 % p + p - a.0 * b.1 % p) % p;
        let dy = (a.0 * b.0 + a.1 * b.1) % p;
        if dx == 0 || dy == 0 {
            return None;
        }
        let (u, v) = (a.0 * a.1 % p, b.0 * b.1 % p);
        Some(((u + p - v) % p * self.inv(dx) % p, (u + v) % p * self.inv(dy) % p))
    }

    pub fn iota(&self, (x, y): Pt) -> Pt {
        (x, self.neg(y))
    }

    pub fn rho(&self, (x, y): Pt) -> Pt {
        (self.neg(y), x)
    }

    pub fn tau(&self, (x, y): Pt) -> Pt {
        let t = self.t.expect("rescaled");
        (self.inv(t * x % self.p), self.inv(t * y % self.p))
    }

    /// `τ^tau ρ^k`.
    pub fn g(&self, k: u32, tau: bool, pt: Pt) -> Pt {
        let mut q = pt;
        for _ in 0..k {
            q = self.rho(q);
        }
        if tau {
            self.tau(q)
        } else {
            q
        }
    }

    /// Gluing class of `[P, i]` as a sorted list of `(i, x, y)`.
    pub fn class(&self, pt: Pt, i: u8) -> Vec<(u8, u64, u64)> {
        let mut v = vec![(i & 1, pt.0, pt.1)];
        if self.is_oo(pt) {
            let q = self.tau(pt);
            v.push((1 - (i & 1), q.0, q.1));
            v.sort();
        }
        v
    }

    /// Every class of the glued curve, sorted.
    pub fn classes(&self) -> Vec<Vec<(u8, u64, u64)>> {
        let mut v: Vec<_> = self
            .points()
            .into_iter()
            .flat_map(|pt| [self.class(pt, 0), self.class(pt, 1)])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Class addition by the first applicable rule, scanning members in
    /// order and trying `⊕₀` before `⊕₁`.
    pub fn proj_add(&self, a: &[(u8, u64, u64)], b: &[(u8, u64, u64)]) -> Option<Vec<(u8, u64, u64)>> {
        for &(i, x1, y1) in a {
            for &(j, x2, y2) in b {
                if let Some(s) = self.add0((x1, y1), (x2, y2)) {
                    return Some(self.class(s, i ^ j));
                }
                if let Some(s) = self.add1((x1, y1), (x2, y2)) {
                    return Some(self.class(s, i ^ j));
                }
            }
        }
        None
    }
}
