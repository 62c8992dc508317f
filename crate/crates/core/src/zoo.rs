//! A corpus of small algebras: groups of order at most 8, small rings,
//! lattices, semilattices and a few other test subjects.

use crate::algebra::{direct_product, FiniteAlgebra, Signature};
use crate::config::Caps;

fn group_signature() -> Signature {
    Signature::new([("mul", 2), ("inv", 1), ("e", 0)]).expect("static signature")
}

fn additive_signature() -> Signature {
    Signature::new([("+", 2), ("-", 1), ("0", 0)]).expect("static signature")
}

fn ring_signature() -> Signature {
    Signature::new([("+", 2), ("-", 1), ("0", 0), ("*", 2)]).expect("static signature")
}

fn lattice_signature() -> Signature {
    Signature::new([("meet", 2), ("join", 2)]).expect("static signature")
}

/// A group in signature `(mul, inv, e)` from its multiplication.
pub fn group_from_mul(name: &str, n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    let e = (0..n)
        .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        .expect("group has an identity");
    let inv: Vec<usize> = (0..n)
        .map(|a| (0..n).find(|&b| table[a][b] == e).expect("group has inverses"))
        .collect();
    FiniteAlgebra::from_fn(name, n, group_signature(), |s, args| match s {
        0 => table[args[0]][args[1]],
        1 => inv[args[0]],
        _ => e,
    })
    .expect("valid group")
}

/// `Z_n` as a group in signature `(mul, inv, e)`.
pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    group_from_mul(&format!("Z{n}"), n, |a, b| (a + b) % n)
}

/// `Z_n` as an additive group `(+, -, 0)`.
pub fn z_mod(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(format!("Z{n}"), n, additive_signature(), |s, args| match s {
        0 => (args[0] + args[1]) % n,
        1 => (n - args[0]) % n,
        _ => 0,
    })
    .expect("valid group")
}

/// `Z₂` with only `(+, 0)`.
pub fn z2_plus_zero() -> FiniteAlgebra {
    let sig = Signature::new([("+", 2), ("0", 0)]).expect("static signature");
    FiniteAlgebra::from_fn("Z2(+,0)", 2, sig, |s, args| match s {
        0 => args[0] ^ args[1],
        _ => 0,
    })
    .expect("valid algebra")
}

/// `Z_n` with the single ternary operation `x − y + z`.
pub fn affine_z(n: usize) -> FiniteAlgebra {
    let sig = Signature::new([("m", 3)]).expect("static signature");
    FiniteAlgebra::from_fn(format!("Aff(Z{n})"), n, sig, |_, a| (a[0] + n - a[1] + a[2]) % n)
        .expect("valid algebra")
}

const S3_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// `S₃` with permutations listed lexicographically: 0 is the identity,
/// 3 and 4 are the 3-cycles, 1, 2, 5 are transpositions.
pub fn symmetric_group_3() -> FiniteAlgebra {
    let index = |p: [usize; 3]| S3_PERMS.iter().position(|q| *q == p).expect("permutation");
    group_from_mul("S3", 6, |a, b| {
        // (a·b)(i) = a(b(i))
        let (p, q) = (S3_PERMS[a], S3_PERMS[b]);
        index([p[q[0]], p[q[1]], p[q[2]]])
    })
}

/// Sign of an element of [`symmetric_group_3`] (0 even, 1 odd).
pub fn s3_sign(g: usize) -> usize {
    match g {
        0 | 3 | 4 => 0,
        _ => 1,
    }
}

/// Dihedral group of order `2n`; element `i + n·j` is `r^i s^j`.
pub fn dihedral_group(n: usize) -> FiniteAlgebra {
    group_from_mul(&format!("D{n}"), 2 * n, |a, b| {
        let (i, j) = (a % n, a / n);
        let (k, l) = (b % n, b / n);
        // r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        rot + n * ((j + l) % 2)
    })
}

/// Quaternion group: elements `±1, ±i, ±j, ±k` as `sign·4 + unit`.
pub fn quaternion_group() -> FiniteAlgebra {
    // unit products: (sign, unit) for 1, i, j, k
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    group_from_mul("Q8", 8, |a, b| {
        let (sa, ua) = (a / 4, a % 4);
        let (sb, ub) = (b / 4, b % 4);
        let (s, u) = UNIT[ua][ub];
        ((sa + sb + s) % 2) * 4 + u
    })
}

fn product_group(name: &str, factors: &[FiniteAlgebra]) -> FiniteAlgebra {
    let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
    direct_product(&refs, &Caps::default())
        .expect("small product")
        .0
        .with_name(name)
}

/// All groups of order at most 8, up to isomorphism, in signature `(mul, inv, e)`.
pub fn small_groups() -> Vec<FiniteAlgebra> {
    vec![
        cyclic_group(1),
        cyclic_group(2),
        cyclic_group(3),
        cyclic_group(4),
        product_group("Z2xZ2", &[cyclic_group(2), cyclic_group(2)]),
        cyclic_group(5),
        cyclic_group(6),
        symmetric_group_3(),
        cyclic_group(7),
        cyclic_group(8),
        product_group("Z4xZ2", &[cyclic_group(4), cyclic_group(2)]),
        product_group("Z2xZ2xZ2", &[cyclic_group(2), cyclic_group(2), cyclic_group(2)]),
        dihedral_group(4),
        quaternion_group(),
    ]
}

/// The abelian groups among [`small_groups`].
pub fn small_abelian_groups() -> Vec<FiniteAlgebra> {
    small_groups()
        .into_iter()
        .filter(|g| {
            let n = g.size();
            (0..n).all(|a| (0..n).all(|b| g.apply(0, &[a, b]) == g.apply(0, &[b, a])))
        })
        .collect()
}

/// The ring `Z_n` in signature `(+, -, 0, *)`.
pub fn ring_z(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(format!("Zring{n}"), n, ring_signature(), |s, a| match s {
        0 => (a[0] + a[1]) % n,
        1 => (n - a[0]) % n,
        2 => 0,
        _ => (a[0] * a[1]) % n,
    })
    .expect("valid ring")
}

/// `Z₂ × Z₂` as a ring with componentwise operations; element `2a + b`.
pub fn ring_z2_squared() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("Zring2xZring2", 4, ring_signature(), |s, a| match s {
        0 => a[0] ^ a[1],
        1 => a[0],
        2 => 0,
        _ => a[0] & a[1],
    })
    .expect("valid ring")
}

/// Upper-triangular 2×2 matrices over `Z₂`; `[[a,b],[0,c]]` is `4a + 2b + c`.
pub fn ring_upper_triangular_z2() -> FiniteAlgebra {
    let dec = |x: usize| (x >> 2 & 1, x >> 1 & 1, x & 1);
    let enc = |a: usize, b: usize, c: usize| (a & 1) << 2 | (b & 1) << 1 | (c & 1);
    FiniteAlgebra::from_fn("UT2(Z2)", 8, ring_signature(), |s, args| match s {
        0 => args[0] ^ args[1],
        1 => args[0],
        2 => 0,
        _ => {
            let (a, b, c) = dec(args[0]);
            let (d, e, f) = dec(args[1]);
            enc(a * d, a * e + b * f, c * f)
        }
    })
    .expect("valid ring")
}

/// Rings used as commutator test subjects.
pub fn small_rings() -> Vec<FiniteAlgebra> {
    vec![
        ring_z(2),
        ring_z(3),
        ring_z(4),
        ring_z(6),
        ring_z(8),
        ring_z2_squared(),
        ring_upper_triangular_z2(),
    ]
}

/// Commutative rings of order at most 8 used as factors of random subdirect products.
pub fn small_commutative_rings() -> Vec<FiniteAlgebra> {
    vec![ring_z(2), ring_z(3), ring_z(4), ring_z(6), ring_z(8), ring_z2_squared()]
}

/// `({0,1}, ∧)`.
pub fn meet_semilattice_2() -> FiniteAlgebra {
    let sig = Signature::new([("meet", 2)]).expect("static signature");
    FiniteAlgebra::from_fn("SL2", 2, sig, |_, a| a[0] & a[1]).expect("valid semilattice")
}

/// The two-element lattice `0 < 1`.
pub fn lattice_2() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("L2", 2, lattice_signature(), |s, a| match s {
        0 => a[0] & a[1],
        _ => a[0] | a[1],
    })
    .expect("valid lattice")
}

/// A lattice from its order relation (`leq[a][b]` means `a ≤ b`).
pub fn lattice_from_order(name: &str, leq: &[Vec<bool>]) -> FiniteAlgebra {
    let n = leq.len();
    let bound = |a: usize, b: usize, upper: bool| -> usize {
        let cands: Vec<usize> = (0..n)
            .filter(|&c| if upper { leq[a][c] && leq[b][c] } else { leq[c][a] && leq[c][b] })
            .collect();
        *cands
            .iter()
            .find(|&&c| {
                cands
                    .iter()
                    .all(|&d| if upper { leq[c][d] } else { leq[d][c] })
            })
            .expect("order is a lattice")
    };
    FiniteAlgebra::from_fn(name, n, lattice_signature(), |s, a| bound(a[0], a[1], s == 1))
        .expect("valid lattice")
}

/// The diamond `M₃`: `0` bottom, atoms `a=1, b=2, c=3`, `4` top.
pub fn m3() -> FiniteAlgebra {
    let leq: Vec<Vec<bool>> = (0..5)
        .map(|x| (0..5).map(|y| x == y || x == 0 || y == 4).collect())
        .collect();
    lattice_from_order("M3", &leq)
}

/// The pentagon `N₅`: `0 < a=1 < c=2 < 1=4`, `0 < b=3 < 4`.
pub fn n5() -> FiniteAlgebra {
    let mut leq = vec![vec![false; 5]; 5];
    for (x, row) in leq.iter_mut().enumerate() {
        row[x] = true;
        row[4] = true;
    }
    leq[0] = vec![true; 5];
    leq[1][2] = true;
    lattice_from_order("N5", &leq)
}

/// `({0,1}, ·, 1)`, the two-element multiplicative monoid.
pub fn monoid_2() -> FiniteAlgebra {
    let sig = Signature::new([("mul", 2), ("one", 0)]).expect("static signature");
    FiniteAlgebra::from_fn("T2", 2, sig, |s, a| match s {
        0 => a[0] & a[1],
        _ => 1,
    })
    .expect("valid monoid")
}

/// Looks an algebra up by the names used on the command line.
pub fn builtin(name: &str) -> Option<FiniteAlgebra> {
    let lower = name.to_ascii_lowercase();
    let parse_n = |prefix: &str| lower.strip_prefix(prefix).and_then(|d| d.parse::<usize>().ok());
    Some(match lower.as_str() {
        "s3" => symmetric_group_3(),
        "d4" => dihedral_group(4),
        "q8" => quaternion_group(),
        "klein" | "z2xz2" => product_group("Z2xZ2", &[cyclic_group(2), cyclic_group(2)]),
        "z4xz2" => product_group("Z4xZ2", &[cyclic_group(4), cyclic_group(2)]),
        "z2xz2xz2" => product_group("Z2xZ2xZ2", &[cyclic_group(2), cyclic_group(2), cyclic_group(2)]),
        "z2plus" => z2_plus_zero(),
        "zring2xzring2" => ring_z2_squared(),
        "ut2" => ring_upper_triangular_z2(),
        "sl2" => meet_semilattice_2(),
        "l2" => lattice_2(),
        "m3" => m3(),
        "n5" => n5(),
        "t2" => monoid_2(),
        _ => {
            if let Some(n) = parse_n("zring") {
                ring_z(n)
            } else if let Some(n) = parse_n("aff") {
                affine_z(n)
            } else if let Some(n) = parse_n("add") {
                z_mod(n)
            } else if let Some(n) = parse_n("z") {
                cyclic_group(n)
            } else if let Some(n) = parse_n("d") {
                dihedral_group(n)
            } else {
                return None;
            }
        }
    })
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "z<n>", "add<n>", "zring<n>", "aff<n>", "d<n>", "s3", "q8", "klein", "z4xz2", "z2xz2xz2",
    "z2plus", "zring2xzring2", "ut2", "sl2", "l2", "m3", "n5", "t2",
];
