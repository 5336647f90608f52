//! Independent known-answer oracle for the Python package.
//!
//! Derives every BN254 parameter set (round constants, MDS matrices, Griffin
//! coefficients, Reinforced Concrete radices/S-box) with the SHAKE128 sampler
//! common to the public reference implementations, evaluates the three permutations,
//! the sponge and the 2-to-1 compression with arkworks field arithmetic, and
//! writes `params_<kind>.json` plus `kat_<kind>.json` into the output dir.
//!
//! Usage: cargo run --release -- <out_dir>

use std::convert::TryInto;
use std::fs;
use std::path::Path;

use ark_ff::{BigInteger, BigInteger256, Field, LegendreSymbol, One, PrimeField, Zero};
use num_bigint::BigUint;
use serde_json::{json, Value};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake128;
use zkhash::fields::bn256::FpBN256 as F;

const T: usize = 3;
const D: u64 = 5;
const RESCUE_ROUNDS: usize = 14;
const GRIFFIN_ROUNDS: usize = 14;
const RC_PRE_ROUNDS: usize = 3;
const RC_TOTAL_ROUNDS: usize = 2 * RC_PRE_ROUNDS + 1;
const RC_SBOX_V: u64 = 641;
const RC_SI: [u64; 27] = [
    673, 678, 667, 683, 680, 655, 683, 683, 681, 683, 675, 668, 675, 677, 680, 681, 669, 683, 681,
    677, 668, 654, 663, 666, 656, 658, 651,
];
const RC_AB: [u64; 4] = [1, 3, 2, 4];
const RATE: usize = 2;
const N_VECTORS: usize = 128;

fn init_shake(tag: &str) -> impl XofReader {
    let mut shake = Shake128::default();
    shake.update(tag.as_bytes());
    for w in <F as PrimeField>::MODULUS.0.iter() {
        shake.update(&w.to_le_bytes());
    }
    shake.finalize_xof()
}

fn fe_from_shake(reader: &mut impl XofReader) -> F {
    let bits = <F as PrimeField>::MODULUS_BIT_SIZE as usize;
    let mask: u8 = if bits % 8 == 0 { 0xff } else { (1u8 << (bits % 8)) - 1 };
    let mut buf = [0u8; 32];
    loop {
        reader.read(&mut buf);
        buf[31] &= mask;
        let mut words = [0u64; 4];
        for (i, w) in words.iter_mut().enumerate() {
            *w = u64::from_le_bytes(buf[i * 8..i * 8 + 8].try_into().unwrap());
        }
        if let Some(x) = F::from_bigint(BigInteger256::new(words)) {
            return x;
        }
    }
}

fn fe_from_shake_nonzero(reader: &mut impl XofReader) -> F {
    loop {
        let x = fe_from_shake(reader);
        if !x.is_zero() {
            return x;
        }
    }
}

fn hx(x: &F) -> String {
    let bytes = x.into_bigint().to_bytes_be();
    let mut s = String::from("0x");
    for b in bytes {
        s.push_str(&format!("{:02x}", b));
    }
    s
}

fn hx_vec(v: &[F]) -> Value {
    Value::from(v.iter().map(hx).collect::<Vec<_>>())
}

fn hx_mat(m: &[Vec<F>]) -> Value {
    Value::from(m.iter().map(|r| hx_vec(r)).collect::<Vec<_>>())
}

fn modulus_big() -> BigUint {
    BigUint::from_bytes_le(&<F as PrimeField>::MODULUS.to_bytes_le())
}

fn d_inv() -> (BigUint, Vec<u64>) {
    let p1 = modulus_big() - 1u32;
    for k in 1u32..(D as u32) {
        let num = &p1 * k + 1u32;
        if (&num % D) == BigUint::zero() {
            let e = num / D;
            let digits = e.to_u64_digits();
            return (e, digits);
        }
    }
    panic!("d not invertible mod p-1");
}

fn circ_211() -> Vec<Vec<F>> {
    let two = F::from(2u64);
    let one = F::one();
    vec![vec![two, one, one], vec![one, two, one], vec![one, one, two]]
}

fn mat_vec(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(F::zero(), |acc, (a, b)| acc + *a * b))
        .collect()
}

// ---------------------------------------------------------------- Rescue-Prime

struct Rescue {
    mds: Vec<Vec<F>>,
    rc: Vec<Vec<F>>,
    dinv: Vec<u64>,
}

fn rescue_mds() -> Vec<Vec<F>> {
    // systematic Vandermonde code over the smallest primitive root (5 for this p)
    let g = F::from(5u64);
    let v = |i: usize, j: usize| g.pow([(i * j) as u64]);
    let left: Vec<Vec<F>> = (0..T).map(|i| (0..T).map(|j| v(i, j)).collect()).collect();
    let right: Vec<Vec<F>> = (0..T).map(|i| (T..2 * T).map(|j| v(i, j)).collect()).collect();
    let inv = zkhash::utils::mat_inverse(&left);
    // echelon form right half = inv(left) * right; MDS = its transpose
    let mut a = vec![vec![F::zero(); T]; T];
    for i in 0..T {
        for j in 0..T {
            for k in 0..T {
                a[i][j] += inv[i][k] * right[k][j];
            }
        }
    }
    zkhash::utils::mat_transpose(&a)
}

impl Rescue {
    fn new() -> Self {
        let mut shake = init_shake("RescuePrime");
        let rc = (0..2 * RESCUE_ROUNDS)
            .map(|_| (0..T).map(|_| fe_from_shake(&mut shake)).collect())
            .collect();
        Rescue { mds: rescue_mds(), rc, dinv: d_inv().1 }
    }

    fn permute(&self, s: &[F]) -> Vec<F> {
        let mut st = s.to_vec();
        for r in 0..RESCUE_ROUNDS {
            st = st.iter().map(|x| x.pow([D])).collect();
            st = mat_vec(&self.mds, &st).iter().zip(&self.rc[2 * r]).map(|(a, c)| *a + c).collect();
            st = st.iter().map(|x| x.pow(&self.dinv)).collect();
            st = mat_vec(&self.mds, &st).iter().zip(&self.rc[2 * r + 1]).map(|(a, c)| *a + c).collect();
        }
        st
    }

    fn params_json(&self) -> Value {
        json!({
            "kind": "rescue_prime",
            "rounds": RESCUE_ROUNDS,
            "mds": hx_mat(&self.mds),
            "round_constants": Value::from(
                (0..RESCUE_ROUNDS)
                    .map(|r| { let mut v = self.rc[2 * r].clone(); v.extend(self.rc[2 * r + 1].iter()); hx_vec(&v) })
                    .collect::<Vec<_>>()),
        })
    }
}

// --------------------------------------------------------------------- Griffin

struct Griffin {
    rc: Vec<Vec<F>>,
    alpha: F,
    beta: F,
    dinv: Vec<u64>,
}

impl Griffin {
    fn new() -> Self {
        let mut shake = init_shake("Griffin");
        let rc = (0..GRIFFIN_ROUNDS - 1)
            .map(|_| (0..T).map(|_| fe_from_shake(&mut shake)).collect())
            .collect();
        let (alpha, beta) = loop {
            let alpha = fe_from_shake_nonzero(&mut shake);
            let beta = fe_from_shake_nonzero(&mut shake);
            if alpha == beta {
                continue;
            }
            let disc = alpha.square() - beta.double().double();
            if disc.legendre() == LegendreSymbol::QuadraticNonResidue {
                break (alpha, beta);
            }
        };
        Griffin { rc, alpha, beta, dinv: d_inv().1 }
    }

    fn affine(&self, st: &mut [F], round: Option<usize>) {
        let sum: F = st.iter().fold(F::zero(), |a, b| a + b);
        for (i, el) in st.iter_mut().enumerate() {
            *el += sum;
            if let Some(r) = round {
                if r < GRIFFIN_ROUNDS - 1 {
                    *el += self.rc[r][i];
                }
            }
        }
    }

    fn permute(&self, s: &[F]) -> Vec<F> {
        let mut st = s.to_vec();
        self.affine(&mut st, None);
        for r in 0..GRIFFIN_ROUNDS {
            let y0 = st[0].pow(&self.dinv);
            let y1 = st[1].pow([D]);
            let l = y0 + y1;
            let y2 = st[2] * (l.square() + self.alpha * l + self.beta);
            st = vec![y0, y1, y2];
            self.affine(&mut st, Some(r));
        }
        st
    }

    fn params_json(&self) -> Value {
        json!({
            "kind": "griffin",
            "rounds": GRIFFIN_ROUNDS,
            "mds": hx_mat(&circ_211()),
            "round_constants": Value::from(self.rc.iter().map(|v| hx_vec(v)).collect::<Vec<_>>()),
            "griffin": {"alpha": hx(&self.alpha), "beta": hx(&self.beta), "gamma": hx(&F::one())},
        })
    }
}

// --------------------------------------------------------- Reinforced Concrete

struct Rc {
    rc: Vec<Vec<F>>,
    sbox: Vec<u64>,
}

fn divmod_small(words: &mut [u64; 4], s: u64) -> u64 {
    let mut rem: u128 = 0;
    for i in (0..4).rev() {
        let cur = (rem << 64) | words[i] as u128;
        words[i] = (cur / s as u128) as u64;
        rem = cur % s as u128;
    }
    rem as u64
}

fn modpow_small(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl Rc {
    fn new() -> Self {
        let mut shake = init_shake("ReinforcedConcrete");
        let rc = (0..=RC_TOTAL_ROUNDS)
            .map(|_| (0..T).map(|_| fe_from_shake(&mut shake)).collect())
            .collect();
        // inversion in F_v on the small domain, 0 -> 0
        let sbox = (0..RC_SBOX_V)
            .map(|x| if x == 0 { 0 } else { modpow_small(x, RC_SBOX_V - 2, RC_SBOX_V) })
            .collect();
        Rc { rc, sbox }
    }

    fn concrete(&self, st: &mut [F], round: usize) {
        let sum: F = st.iter().fold(F::zero(), |a, b| a + b);
        for (i, el) in st.iter_mut().enumerate() {
            *el += sum + self.rc[round][i];
        }
    }

    fn bricks(&self, st: &[F]) -> Vec<F> {
        let (x1, x2, x3) = (st[0], st[1], st[2]);
        let a1 = F::from(RC_AB[0]);
        let a2 = F::from(RC_AB[1]);
        let b1 = F::from(RC_AB[2]);
        let b2 = F::from(RC_AB[3]);
        vec![
            x1.pow([D]),
            x2 * (x1.square() + a1 * x1 + b1),
            x3 * (x2.square() + a2 * x2 + b2),
        ]
    }

    fn bar(&self, x: &F) -> F {
        let n = RC_SI.len();
        let mut w = x.into_bigint().0;
        let mut digits = vec![0u64; n];
        for i in (1..n).rev() {
            digits[i] = divmod_small(&mut w, RC_SI[i]);
        }
        assert!(w[1] == 0 && w[2] == 0 && w[3] == 0 && w[0] < RC_SI[0]);
        digits[0] = w[0];
        for d in digits.iter_mut() {
            if *d < RC_SBOX_V {
                *d = self.sbox[*d as usize];
            }
        }
        let mut acc = F::from(digits[0]);
        for i in 1..n {
            acc = acc * F::from(RC_SI[i]) + F::from(digits[i]);
        }
        acc
    }

    fn permute(&self, s: &[F]) -> Vec<F> {
        let mut st = s.to_vec();
        self.concrete(&mut st, 0);
        for i in 1..=RC_PRE_ROUNDS {
            st = self.bricks(&st);
            self.concrete(&mut st, i);
        }
        st = st.iter().map(|x| self.bar(x)).collect();
        self.concrete(&mut st, RC_PRE_ROUNDS + 1);
        for i in RC_PRE_ROUNDS + 2..=RC_TOTAL_ROUNDS {
            st = self.bricks(&st);
            self.concrete(&mut st, i);
        }
        st
    }

    fn params_json(&self) -> Value {
        let mut sched = vec!["concrete"];
        for _ in 0..RC_PRE_ROUNDS {
            sched.extend(["bricks", "concrete"]);
        }
        sched.extend(["bars", "concrete"]);
        for _ in 0..RC_PRE_ROUNDS {
            sched.extend(["bricks", "concrete"]);
        }
        json!({
            "kind": "reinforced_concrete",
            "rounds": RC_TOTAL_ROUNDS,
            "mds": hx_mat(&circ_211()),
            "round_constants": Value::from(self.rc.iter().map(|v| hx_vec(v)).collect::<Vec<_>>()),
            "rc": {
                "schedule": sched,
                "alpha1": hx(&F::from(RC_AB[0])), "alpha2": hx(&F::from(RC_AB[1])),
                "beta1": hx(&F::from(RC_AB[2])), "beta2": hx(&F::from(RC_AB[3])),
                "radices": RC_SI.to_vec(),
                "sbox_domain": RC_SBOX_V,
                "sbox": self.sbox.clone(),
            },
        })
    }
}

// ------------------------------------------------------------ sponge + compress

fn kind_id(kind: &str) -> u64 {
    match kind {
        "rescue_prime" => 1,
        "griffin" => 2,
        "reinforced_concrete" => 3,
        _ => unreachable!(),
    }
}

fn tag(kind: &str, rate: u64, out_len: u64) -> F {
    // kind_id * 2^64 + rate * 2^32 + out_len
    F::from(kind_id(kind)) * F::from(2u64).pow([64u64]) + F::from(rate) * F::from(1u64 << 32) + F::from(out_len)
}

fn sponge_hash(perm: &dyn Fn(&[F]) -> Vec<F>, kind: &str, input: &[F], out_len: usize) -> Vec<F> {
    let mut st = vec![F::zero(); T];
    st[T - 1] = tag(kind, RATE as u64, out_len as u64);
    let mut pos = 0;
    for x in input {
        st[pos] += x;
        pos += 1;
        if pos == RATE {
            st = perm(&st);
            pos = 0;
        }
    }
    st[pos] += F::one();
    st = perm(&st);
    let mut out = Vec::new();
    let mut pos = 0;
    while out.len() < out_len {
        if pos == RATE {
            st = perm(&st);
            pos = 0;
        }
        out.push(st[pos]);
        pos += 1;
    }
    out
}

fn compress(perm: &dyn Fn(&[F]) -> Vec<F>, kind: &str, a: F, b: F) -> F {
    perm(&[a, b, tag(kind, 0, 0)])[0]
}

fn kat(kind: &str, perm: &dyn Fn(&[F]) -> Vec<F>) -> Value {
    let mut shake = init_shake(&format!("KAT-{}", kind));
    let minus_one = -F::one();
    let mut states: Vec<Vec<F>> = vec![
        vec![F::zero(); T],
        vec![F::from(1u64), F::from(2u64), F::from(3u64)],
        vec![minus_one; T],
    ];
    while states.len() < N_VECTORS {
        states.push((0..T).map(|_| fe_from_shake(&mut shake)).collect());
    }
    let perms: Vec<Value> = states
        .iter()
        .map(|s| json!({"input": hx_vec(s), "output": hx_vec(&perm(s))}))
        .collect();
    let sponge: Vec<Value> = (0..N_VECTORS)
        .map(|i| {
            let input: Vec<F> = (0..i % 8).map(|_| fe_from_shake(&mut shake)).collect();
            let out_len = 1 + i % 3;
            json!({"input": hx_vec(&input), "out_len": out_len,
                   "digest": hx_vec(&sponge_hash(perm, kind, &input, out_len))})
        })
        .collect();
    let comp: Vec<Value> = (0..N_VECTORS)
        .map(|_| {
            let a = fe_from_shake(&mut shake);
            let b = fe_from_shake(&mut shake);
            json!({"a": hx(&a), "b": hx(&b), "output": hx(&compress(perm, kind, a, b))})
        })
        .collect();
    json!({"kind": kind, "rate": RATE, "permutation": perms, "sponge": sponge, "compress": comp})
}

fn common(mut v: Value) -> Value {
    let (dinv, _) = d_inv();
    let obj = v.as_object_mut().unwrap();
    obj.insert("field".into(), json!({"modulus": modulus_big().to_string()}));
    obj.insert("m".into(), json!(T));
    obj.insert("d".into(), json!(D));
    obj.insert("d_inv".into(), json!(dinv.to_string()));
    v
}

fn main() {
    let out = std::env::args().nth(1).expect("usage: kat_oracle <out_dir>");
    let out = Path::new(&out);
    fs::create_dir_all(out).unwrap();

    let rescue = Rescue::new();
    let griffin = Griffin::new();
    let rc = Rc::new();

    let jobs: Vec<(&str, Value, Box<dyn Fn(&[F]) -> Vec<F>>)> = vec![
        ("rescue_prime", rescue.params_json(), Box::new(|s: &[F]| rescue.permute(s))),
        ("griffin", griffin.params_json(), Box::new(|s: &[F]| griffin.permute(s))),
        ("reinforced_concrete", rc.params_json(), Box::new(|s: &[F]| rc.permute(s))),
    ];
    for (kind, params, perm) in jobs.iter() {
        let params = common(params.clone());
        fs::write(out.join(format!("params_{}.json", kind)), serde_json::to_string_pretty(&params).unwrap()).unwrap();
        let vectors = kat(kind, perm.as_ref());
        fs::write(out.join(format!("kat_{}.json", kind)), serde_json::to_string_pretty(&vectors).unwrap()).unwrap();
        eprintln!("wrote {}", kind);
    }
}
