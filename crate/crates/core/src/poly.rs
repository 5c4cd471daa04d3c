//! Dense polynomials over a prime field, coefficients stored constant term first.
//!
//! Only what modulus selection and irreducibility testing need.

pub(crate) fn add_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as u16 + b as u16) % q as u16) as u8
}

pub(crate) fn sub_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as u16 + q as u16 - b as u16) % q as u16) as u8
}

pub(crate) fn mul_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as u16 * b as u16) % q as u16) as u8
}

pub(crate) fn inv_mod(a: u8, q: u8) -> Option<u8> {
    if a.is_multiple_of(q) {
        return None;
    }
    // Fermat: a^(q-2)
    let mut result = 1u8;
    let mut base = a % q;
    let mut e = q as u32 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    Some(result)
}

fn trim(p: &mut Vec<u8>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Remainder of `a` modulo `m`; `m` must be nonzero.
pub(crate) fn rem(a: &[u8], m: &[u8], q: u8) -> Vec<u8> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], q).expect("nonzero leading coefficient");
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = mul_mod(r[top], lead_inv, q);
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(factor, c, q), q);
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
        }
    }
    trim(&mut out);
    out
}

fn mulmod(a: &[u8], b: &[u8], m: &[u8], q: u8) -> Vec<u8> {
    rem(&mul(a, b, q), m, q)
}

fn powmod(base: &[u8], mut e: u64, m: &[u8], q: u8) -> Vec<u8> {
    let mut result = rem(&[1], m, q);
    let mut b = rem(base, m, q);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, m, q);
        }
        b = mulmod(&b, &b, m, q);
        e >>= 1;
    }
    result
}

fn sub(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
    let len = a.len().max(b.len());
    let mut out: Vec<u8> = (0..len)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), q))
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, q);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility of a monic polynomial of degree `n >= 1` over F_q.
///
/// f is irreducible iff x^(q^n) = x mod f and gcd(x^(q^d) - x, f) = 1 for
/// every proper divisor d of n.
pub(crate) fn is_irreducible(f: &[u8], q: u8) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = [0u8, 1];
    // frob[d] = x^(q^d) mod f
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(rem(&x, f, q));
    for d in 1..=n {
        let prev = &frob[d - 1];
        frob.push(powmod(prev, q as u64, f, q));
    }
    if frob[n] != rem(&x, f, q) {
        return false;
    }
    (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| {
        let diff = sub(&frob[d], &x, q);
        let g = gcd(f, &diff, q);
        g.len() == 1
    })
}
