//! Witness constructions: classical small colorings, graph products that
//! combine witnesses, and colorings from sum-free partitions.

use thiserror::Error;

use crate::coloring::{cyclic_coloring, make_coloring, verify_witness, ColoringError, EdgeColoring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("unknown builtin {0:?}; available: c5, wagner8, cyc13, paley17, gf16")]
    UnknownBuiltin(String),
    #[error("diagonal product needs equal color counts, got {r1} and {r2}")]
    ColorCountMismatch { r1: usize, r2: usize },
    #[error("partition part {part} contains {value}, outside 1..={max}")]
    PartRange { part: usize, value: u32, max: u32 },
    #[error("value {value} appears in more than one part")]
    PartOverlap { value: u32 },
    #[error("value {value} is not covered by any part")]
    PartGap { value: u32 },
    #[error("partition is not sum-free: part {part} has {x} + {y} = {z}")]
    NotSumFree { part: usize, x: u32, y: u32, z: u32 },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Names accepted by [`builtin_witness`], in presentation order.
pub const BUILTIN_NAMES: [&str; 5] = ["c5", "wagner8", "cyc13", "paley17", "gf16"];

/// Per-color clique caps the named builtin is constructed to avoid.
pub fn builtin_targets(name: &str) -> Result<&'static [u32], ConstructError> {
    match name {
        "c5" => Ok(&[3, 3]),
        "wagner8" => Ok(&[3, 4]),
        "cyc13" => Ok(&[3, 5]),
        "paley17" => Ok(&[4, 4]),
        "gf16" => Ok(&[3, 3, 3]),
        other => Err(ConstructError::UnknownBuiltin(other.to_string())),
    }
}

/// Construct one of the classical witnesses by name.
///
/// - `c5`: the pentagon 2-coloring of `K_5` (no monochromatic triangle).
/// - `wagner8`: `C_8(1,4)` against its complement; color 1 triangle-free,
///   color 2 `K_4`-free.
/// - `cyc13`: `C_13(1,5,8,12)` against its complement; color 1 triangle-free,
///   color 2 `K_5`-free.
/// - `paley17`: quadratic residues mod 17; both colors `K_4`-free.
/// - `gf16`: cubic-residue classes of `GF(16)^*`; three triangle-free colors.
///
/// Every builtin is re-verified against its targets before being returned, so
/// a caller can treat the result as a checked witness.
pub fn builtin_witness(name: &str) -> Result<EdgeColoring, ConstructError> {
    let c = match name {
        "c5" => cyclic_coloring(5, &[vec![1, 4], vec![2, 3]])?,
        "wagner8" => cyclic_coloring(8, &[vec![1, 4, 7], vec![2, 3, 5, 6]])?,
        "cyc13" => cyclic_coloring(
            13,
            &[vec![1, 5, 8, 12], vec![2, 3, 4, 6, 7, 9, 10, 11]],
        )?,
        "paley17" => {
            let qr: Vec<u32> = vec![1, 2, 4, 8, 9, 13, 15, 16];
            let rest: Vec<u32> = (1..17).filter(|d| !qr.contains(d)).collect();
            cyclic_coloring(17, &[qr, rest])?
        }
        "gf16" => gf16_coloring(),
        other => return Err(ConstructError::UnknownBuiltin(other.to_string())),
    };
    let rep = verify_witness(&c, builtin_targets(name)?)?;
    assert!(rep.valid, "builtin {name} failed its own verification: {:?}", rep.counterexample);
    Ok(c)
}

/// The 3-coloring of `K_16` from cubic residues of `GF(16)^*`.
///
/// Field elements are nibbles under the irreducible polynomial
/// `x^4 + x + 1`; addition is XOR, and 2 (= `x`) generates the multiplicative
/// group. Edge `{a, b}` is colored by `log_2(a XOR b) mod 3`, which is
/// well-defined on edges because `a XOR b` is symmetric. Each class is
/// triangle-free: a triangle would give nonzero `u, v, w` in one class with
/// `u XOR v = w`.
pub fn gf16_coloring() -> EdgeColoring {
    let mut log = [0usize; 16];
    let mut x: u16 = 1;
    for e in 0..15 {
        log[x as usize] = e;
        x <<= 1;
        if x & 0x10 != 0 {
            x = (x ^ 0x13) & 0xf;
        }
    }
    let mut colors = Vec::with_capacity(16 * 15 / 2);
    for a in 0..16u16 {
        for b in (a + 1)..16 {
            colors.push((log[(a ^ b) as usize] % 3) as u16 + 1);
        }
    }
    make_coloring(16, 3, colors).expect("dense triangle of a fixed shape")
}

fn grid_coloring<F>(n1: usize, n2: usize, r: usize, color: F) -> EdgeColoring
where
    F: Fn(usize, usize, usize, usize) -> u16,
{
    let n = n1 * n2;
    let mut colors = Vec::with_capacity(n * (n - 1) / 2);
    for p in 0..n {
        for q in (p + 1)..n {
            let (u1, v1) = (p / n2, p % n2);
            let (u2, v2) = (q / n2, q % n2);
            colors.push(color(u1, v1, u2, v2));
        }
    }
    make_coloring(n, r, colors).expect("grid product of nonempty colorings")
}

/// Color-disjoint product: vertices are pairs `(u, v)`; an edge between
/// different `u`-rows takes its color from `c1`, an edge inside a row takes
/// its color from `c2`, shifted past `c1`'s palette.
///
/// If `c1` avoids `K_{a_i}` in color `i` and `c2` avoids `K_{b_j}` in color
/// `j`, the product on `n1*n2` vertices avoids the concatenated caps
/// `(a_1..a_{r1}, b_1..b_{r2})`: a clique in a low color meets each row at
/// most once and projects to a `c1`-clique, while a clique in a high color
/// stays inside one row.
pub fn abbott_product(c1: &EdgeColoring, c2: &EdgeColoring) -> EdgeColoring {
    let r1 = c1.r() as u16;
    grid_coloring(c1.n(), c2.n(), c1.r() + c2.r(), |u1, v1, u2, v2| {
        if u1 != u2 {
            c1.color(u1, u2)
        } else {
            r1 + c2.color(v1, v2)
        }
    })
}

/// Shared-palette product of two colorings with the same color count: edges
/// between rows take `c1`'s color, edges inside a row take `c2`'s color
/// unshifted.
///
/// A color-`i` clique decomposes into rows: the rows it touches form a
/// color-`i` clique in `c1` and its trace in each row is one in `c2`, so if
/// `c1` avoids `K_{s+1}` and `c2` avoids `K_{t+1}` in color `i`, the product
/// avoids `K_{s*t + 1}` there.
pub fn diagonal_product(
    c1: &EdgeColoring,
    c2: &EdgeColoring,
) -> Result<EdgeColoring, ConstructError> {
    if c1.r() != c2.r() {
        return Err(ConstructError::ColorCountMismatch { r1: c1.r(), r2: c2.r() });
    }
    Ok(grid_coloring(c1.n(), c2.n(), c1.r(), |u1, v1, u2, v2| {
        if u1 != u2 {
            c1.color(u1, u2)
        } else {
            c2.color(v1, v2)
        }
    }))
}

/// How a sum-free partition is turned into an edge coloring.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PartitionMode {
    /// Parts cover `1..=n`; vertices are `0..=n` and edge `{i, j}` is colored
    /// by the part containing `|i - j|`.
    Linear,
    /// Parts cover the nonzero residues mod `n` and must be symmetric under
    /// negation; the coloring is the cyclic coloring of `K_n`.
    Cyclic,
}

/// A candidate partition of an integer range into sum-free parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SumFreePartition {
    pub mode: PartitionMode,
    /// Linear: largest covered integer. Cyclic: the modulus.
    pub n: u32,
    pub parts: Vec<Vec<u32>>,
}

/// A sum landing in its own part: `x + y = z` (mod `n` in cyclic mode).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SumViolation {
    /// 1-based part index.
    pub part: usize,
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionReport {
    pub valid: bool,
    /// First violation in scan order (parts ascending, then `x <= y`).
    pub violation: Option<SumViolation>,
}

/// Check that `p` is structurally a partition of its range (an error if not)
/// and report whether every part is sum-free.
pub fn validate_partition(p: &SumFreePartition) -> Result<PartitionReport, ConstructError> {
    let max = match p.mode {
        PartitionMode::Linear => p.n,
        PartitionMode::Cyclic => p.n.saturating_sub(1),
    };
    if p.n == 0 || p.parts.is_empty() || max == 0 {
        return Err(ConstructError::PartGap { value: 1 });
    }
    let mut owner = vec![0usize; max as usize + 1];
    for (pi, part) in p.parts.iter().enumerate() {
        for &v in part {
            if v == 0 || v > max {
                return Err(ConstructError::PartRange { part: pi + 1, value: v, max });
            }
            if owner[v as usize] != 0 {
                return Err(ConstructError::PartOverlap { value: v });
            }
            owner[v as usize] = pi + 1;
        }
    }
    for v in 1..=max {
        if owner[v as usize] == 0 {
            return Err(ConstructError::PartGap { value: v });
        }
    }
    if p.mode == PartitionMode::Cyclic {
        // Distance d and n-d label the same edge of K_n.
        for v in 1..=max {
            if owner[v as usize] != owner[(p.n - v) as usize] {
                return Err(ConstructError::PartOverlap { value: v });
            }
        }
    }
    for (pi, part) in p.parts.iter().enumerate() {
        let mut sorted = part.clone();
        sorted.sort_unstable();
        let member = |v: u32| owner.get(v as usize).is_some_and(|&o| o == pi + 1);
        for (ix, &x) in sorted.iter().enumerate() {
            for &y in &sorted[ix..] {
                let z = match p.mode {
                    PartitionMode::Linear => x + y,
                    PartitionMode::Cyclic => (x + y) % p.n,
                };
                if z != 0 && z <= max && member(z) {
                    return Ok(PartitionReport {
                        valid: false,
                        violation: Some(SumViolation { part: pi + 1, x, y, z }),
                    });
                }
            }
        }
    }
    Ok(PartitionReport { valid: true, violation: None })
}

/// Build the triangle-avoiding coloring a valid sum-free partition encodes:
/// `K_{n+1}` in linear mode, `K_n` in cyclic mode. A monochromatic triangle
/// would exhibit a sum `x + y = z` inside one part, so validity of the
/// partition is equivalent to the coloring verifying all-3 targets.
pub fn schur_coloring(p: &SumFreePartition) -> Result<EdgeColoring, ConstructError> {
    let report = validate_partition(p)?;
    if let Some(v) = report.violation {
        return Err(ConstructError::NotSumFree { part: v.part, x: v.x, y: v.y, z: v.z });
    }
    match p.mode {
        PartitionMode::Cyclic => Ok(cyclic_coloring(p.n as usize, &p.parts)?),
        PartitionMode::Linear => {
            let mut owner = vec![0u16; p.n as usize + 1];
            for (pi, part) in p.parts.iter().enumerate() {
                for &v in part {
                    owner[v as usize] = pi as u16 + 1;
                }
            }
            let m = p.n as usize + 1;
            let mut colors = Vec::with_capacity(m * (m - 1) / 2);
            for i in 0..m {
                for j in (i + 1)..m {
                    colors.push(owner[j - i]);
                }
            }
            Ok(make_coloring(m, p.parts.len(), colors)?)
        }
    }
}
