//! Independent reference arithmetic on `u128` coefficient vectors.
//!
//! Everything here is written straight from the definitions (coefficient
//! convolution, long division, Horner substitution) and shares no code with
//! the library kernels.
#![allow(dead_code)]

use gf2collatz::Poly;

pub const M: u128 = 0b111;

pub fn to_poly(a: u128) -> Poly {
    Poly::from_words([a as u64, (a >> 64) as u64])
}

pub fn from_poly(p: &Poly) -> u128 {
    let w = p.words();
    assert!(w.len() <= 2, "oracle values are limited to 128 bits");
    w.iter()
        .enumerate()
        .fold(0, |acc, (i, &x)| acc | (x as u128) << (64 * i))
}

pub fn deg(a: u128) -> Option<u32> {
    (a != 0).then(|| 127 - a.leading_zeros())
}

fn bit(a: u128, i: u32) -> bool {
    i < 128 && (a >> i) & 1 == 1
}

/// `c_k = sum_{i+j=k} a_i b_j` over GF(2); panics if the product overflows.
pub fn mul(a: u128, b: u128) -> u128 {
    let (Some(da), Some(db)) = (deg(a), deg(b)) else {
        return 0;
    };
    assert!(da + db < 128, "oracle product overflows");
    let mut c = 0u128;
    for k in 0..=da + db {
        let mut s = false;
        for i in 0..=k {
            s ^= bit(a, i) && bit(b, k - i);
        }
        if s {
            c |= 1 << k;
        }
    }
    c
}

pub fn divrem(a: u128, b: u128) -> (u128, u128) {
    let db = deg(b).expect("division by zero");
    let (mut q, mut r) = (0u128, a);
    while let Some(dr) = deg(r) {
        if dr < db {
            break;
        }
        q |= 1 << (dr - db);
        r ^= b << (dr - db);
    }
    (q, r)
}

/// Multiplicity of `f` as a factor of `a`, by repeated division.
pub fn val(a: u128, f: u128) -> u32 {
    assert!(a != 0);
    let mut a = a;
    let mut v = 0;
    loop {
        let (q, r) = divrem(a, f);
        if r != 0 {
            return v;
        }
        a = q;
        v += 1;
    }
}

pub fn val_x(a: u128) -> u32 {
    val(a, 0b10)
}

pub fn val_x1(a: u128) -> u32 {
    val(a, 0b11)
}

/// `a(x + 1)` by Horner's rule.
pub fn bar(a: u128) -> u128 {
    let Some(d) = deg(a) else { return 0 };
    let mut acc = 0u128;
    for i in (0..=d).rev() {
        acc = mul(acc, 0b11) ^ (bit(a, i) as u128);
    }
    acc
}

pub fn reciprocal(a: u128) -> u128 {
    let d = deg(a).expect("nonzero");
    (0..=d)
        .filter(|&i| bit(a, i))
        .fold(0, |acc, i| acc | 1 << (d - i))
}

pub fn is_odd(a: u128) -> bool {
    a & 1 == 1 && a.count_ones() % 2 == 1
}

/// Removes every factor `x` and `x + 1`; returns `(a, b, odd part)`.
pub fn strip(p: u128) -> (u32, u32, u128) {
    let a = val_x(p);
    let mut q = p >> a;
    let b = val_x1(q);
    for _ in 0..b {
        q = divrem(q, 0b11).0;
    }
    (a, b, q)
}

/// Odd sequence `A_1, A_3, ..., 1` by the definition.
pub fn odd_sequence(p: u128) -> Vec<u128> {
    let mut cur = strip(p).2;
    let mut out = vec![cur];
    while cur != 1 {
        cur = strip(1 ^ mul(M, cur)).2;
        out.push(cur);
        assert!(out.len() < 1 << 16, "oracle sequence did not terminate");
    }
    out
}

pub fn length(p: u128) -> usize {
    odd_sequence(p).len()
}

pub fn pow(a: u128, n: u32) -> u128 {
    (0..n).fold(1, |acc, _| mul(acc, a))
}

/// `M^n + ... + M + 1`.
pub fn geometric(n: u32) -> u128 {
    (0..=n).fold(0, |acc, k| acc ^ pow(M, k))
}
