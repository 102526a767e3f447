//! Character tables computed from the class multiplication coefficients
//! (Burnside's method), with complex-conjugate pairs merged into real rows.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{MaxwellError, TraceVector};
use crate::symdetect::{OpKind, PointGroupInfo};

const CHAR_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterRow {
    pub name: String,
    /// One value per class, in class order.
    pub values: Vec<f64>,
    /// True when the row is the sum of a complex-conjugate pair of
    /// one-dimensional characters.
    pub complex_pair: bool,
}

impl CharacterRow {
    /// Character at the identity.
    pub fn dimension(&self) -> usize {
        self.values[0].round() as usize
    }

    /// Dimension of each irreducible constituent (half the row dimension for a merged pair).
    pub fn irreducible_dimension(&self) -> usize {
        if self.complex_pair {
            self.dimension() / 2
        } else {
            self.dimension()
        }
    }

    /// `sum size * chi * chi` over classes divided by the group order: 1, or 2 for a merged pair.
    pub fn norm_factor(&self) -> f64 {
        if self.complex_pair {
            2.0
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterTable {
    pub group: String,
    pub order: usize,
    pub class_labels: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub rows: Vec<CharacterRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrepMultiplicity {
    pub irrep: String,
    pub multiplicity: i64,
    pub residual: f64,
}

/// `c[i][j][k]`: number of `x` in class `i` with `x^-1 z` in class `j`, for a fixed `z` in class `k`.
fn class_coefficients(g: &PointGroupInfo) -> Vec<Vec<Vec<f64>>> {
    let r = g.classes.len();
    let mut c = vec![vec![vec![0.0; r]; r]; r];
    for (k, ck) in g.classes.iter().enumerate() {
        let z = ck.representative;
        for (i, ci) in g.classes.iter().enumerate() {
            for &x in &ci.members {
                let y = g.product(g.inverse(x), z);
                c[i][g.class_of(y)][k] += 1.0;
            }
        }
    }
    c
}

fn null_vector(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let k = svd.singular_values.imin();
    v_t.row(k).iter().map(|z| z.conj()).collect()
}

/// Complex irreducible characters, each as values per class.
fn complex_characters(g: &PointGroupInfo) -> Result<Vec<Vec<Complex64>>, MaxwellError> {
    let r = g.classes.len();
    let n = g.order() as f64;
    let sizes: Vec<f64> = g.class_sizes().iter().map(|&s| s as f64).collect();
    let coeffs = class_coefficients(g);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    for _attempt in 0..8 {
        let weights: Vec<f64> = (0..r).map(|_| rng.gen_range(0.5..1.5)).collect();
        let m = DMatrix::from_fn(r, r, |j, k| (0..r).map(|i| weights[i] * coeffs[i][j][k]).sum::<f64>());
        let eigenvalues = m.complex_eigenvalues();
        let mc = m.map(|v| Complex64::new(v, 0.0));
        let mut chars = Vec::with_capacity(r);
        for lambda in eigenvalues.iter() {
            let shifted = &mc - DMatrix::from_diagonal_element(r, r, *lambda);
            let v = null_vector(&shifted);
            if v[0].norm() < 1e-9 {
                break;
            }
            // Normalise so the identity component is 1: the central character.
            let omega: Vec<Complex64> = v.iter().map(|z| z / v[0]).collect();
            let s: f64 = (0..r).map(|k| omega[k].norm_sqr() / sizes[k]).sum();
            let dim = (n / s).sqrt().round();
            chars.push((0..r).map(|k| omega[k] * dim / sizes[k]).collect::<Vec<_>>());
        }
        if chars.len() == r && orthonormal(&chars, &sizes, n) {
            return Ok(chars);
        }
    }
    Err(MaxwellError::CharacterTable(g.label.clone()))
}

fn orthonormal(chars: &[Vec<Complex64>], sizes: &[f64], n: f64) -> bool {
    chars.iter().enumerate().all(|(a, ca)| {
        chars.iter().enumerate().all(|(b, cb)| {
            let s: Complex64 = (0..sizes.len()).map(|k| ca[k] * cb[k].conj() * sizes[k]).sum();
            let want = if a == b { n } else { 0.0 };
            (s - want).norm() < 1e-6 * n
        })
    })
}

fn clean(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < CHAR_TOL {
        r
    } else {
        v
    }
}

/// Real character table of the group. Complex-conjugate one-dimensional
/// characters are merged into a single real row.
pub fn character_table(g: &PointGroupInfo) -> Result<CharacterTable, MaxwellError> {
    let chars = complex_characters(g)?;
    let r = g.classes.len();
    let mut used = vec![false; chars.len()];
    let mut rows = Vec::new();
    for a in 0..chars.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        let real = chars[a].iter().all(|z| z.im.abs() < CHAR_TOL);
        if real {
            rows.push((chars[a].iter().map(|z| clean(z.re)).collect::<Vec<_>>(), false));
            continue;
        }
        let partner = (0..chars.len())
            .find(|&b| !used[b] && (0..r).all(|k| (chars[b][k] - chars[a][k].conj()).norm() < CHAR_TOL))
            .ok_or_else(|| MaxwellError::CharacterTable(g.label.clone()))?;
        used[partner] = true;
        rows.push(((0..r).map(|k| clean(2.0 * chars[a][k].re)).collect(), true));
    }
    let rows = name_rows(g, rows);
    Ok(CharacterTable {
        group: g.label.clone(),
        order: g.order(),
        class_labels: g.class_labels(),
        class_sizes: g.class_sizes(),
        rows,
    })
}

/// Mulliken-style names: A/B for one-dimensional rows (symmetric or not
/// under the principal rotation), E/T/G/H by dimension, g/u for inversion
/// parity, prime/double prime for a horizontal mirror, then a running index
/// where the base name repeats.
fn name_rows(g: &PointGroupInfo, rows: Vec<(Vec<f64>, bool)>) -> Vec<CharacterRow> {
    let principal = g
        .classes
        .iter()
        .enumerate()
        .filter_map(|(k, c)| match c.kind {
            OpKind::Rotation { order, power: 1 } => Some((order, k)),
            _ => None,
        })
        .max_by_key(|&(order, k)| (order, std::cmp::Reverse(k)));
    let inversion = g.classes.iter().position(|c| c.kind == OpKind::Inversion);
    let sigma_h = principal.and_then(|(_, pk)| {
        let axis = g.elements[g.classes[pk].representative].axis;
        g.classes.iter().position(|c| {
            c.kind == OpKind::Reflection
                && c.size() == 1
                && g.elements[c.representative].axis.cross(&axis).norm() < 1e-6
        })
    });

    let mut named: Vec<(String, String, Vec<f64>, bool)> = rows
        .into_iter()
        .map(|(values, pair)| {
            let dim = values[0].round() as usize;
            let letter = if pair {
                "E".to_string()
            } else {
                match dim {
                    1 => match principal {
                        Some((_, k)) if values[k] < 0.5 => "B".into(),
                        _ => "A".into(),
                    },
                    2 => "E".into(),
                    3 => "T".into(),
                    4 => "G".into(),
                    5 => "H".into(),
                    d => format!("Γ{d}"),
                }
            };
            let mut suffix = String::new();
            if let Some(k) = sigma_h.filter(|_| inversion.is_none()) {
                suffix.push_str(if values[k] > 0.0 { "'" } else { "''" });
            }
            if let Some(k) = inversion {
                suffix.push(if values[k] > 0.0 { 'g' } else { 'u' });
            }
            (letter, suffix, values, pair)
        })
        .collect();

    // Trivial row first, then by dimension, letter, suffix and descending values.
    named.sort_by(|a, b| {
        let trivial = |r: &(String, String, Vec<f64>, bool)| !r.2.iter().all(|&v| (v - 1.0).abs() < 1e-9);
        trivial(a)
            .cmp(&trivial(b))
            .then(a.2[0].total_cmp(&b.2[0]))
            .then(a.0.cmp(&b.0))
            .then(a.1.len().cmp(&b.1.len()))
            .then(a.1.cmp(&b.1))
            .then_with(|| {
                b.2.iter()
                    .zip(&a.2)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });

    let mut out = Vec::with_capacity(named.len());
    for (i, (letter, suffix, values, pair)) in named.iter().enumerate() {
        let same: Vec<usize> = (0..named.len())
            .filter(|&k| named[k].0 == *letter && named[k].1 == *suffix)
            .collect();
        let name = if same.len() > 1 {
            let idx = same.iter().position(|&k| k == i).unwrap() + 1;
            insert_index(letter, idx, suffix)
        } else {
            format!("{letter}{suffix}")
        };
        out.push(CharacterRow {
            name,
            values: values.clone(),
            complex_pair: *pair,
        });
    }
    out
}

fn insert_index(letter: &str, idx: usize, suffix: &str) -> String {
    // Primes go after the index, parity subscripts too: A1g, E2'.
    format!("{letter}{idx}{suffix}")
}

impl CharacterTable {
    /// Trace vector of the regular representation.
    pub fn regular(&self) -> TraceVector {
        let mut values = vec![0.0; self.class_sizes.len()];
        values[0] = self.order as f64;
        TraceVector::from_values(&self.group, &self.class_labels, &self.class_sizes, values)
    }

    /// Checks `sum size * chi_a * chi_b = |G| * norm_a * delta_ab`.
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let n = self.order as f64;
        self.rows.iter().enumerate().all(|(a, ra)| {
            self.rows.iter().enumerate().all(|(b, rb)| {
                let s: f64 = (0..self.class_sizes.len())
                    .map(|k| self.class_sizes[k] as f64 * ra.values[k] * rb.values[k])
                    .sum();
                let want = if a == b { n * ra.norm_factor() } else { 0.0 };
                (s - want).abs() <= tol * n
            })
        })
    }
}

/// Multiplicities of each row in a trace vector. Rows with zero
/// multiplicity are omitted; negative values are allowed.
pub fn decompose_irreps(
    trace: &TraceVector,
    table: &CharacterTable,
) -> Result<Vec<IrrepMultiplicity>, MaxwellError> {
    if trace.values.len() != table.class_sizes.len() || trace.group != table.group {
        return Err(MaxwellError::TableMismatch);
    }
    let n = table.order as f64;
    let mut out = Vec::new();
    for row in &table.rows {
        let raw: f64 = (0..table.class_sizes.len())
            .map(|k| table.class_sizes[k] as f64 * row.values[k] * trace.values[k])
            .sum::<f64>()
            / (n * row.norm_factor());
        let m = raw.round();
        let residual = (raw - m).abs();
        if residual > 1e-6 {
            return Err(MaxwellError::NonIntegralMultiplicity {
                irrep: row.name.clone(),
                value: raw,
            });
        }
        if m != 0.0 {
            out.push(IrrepMultiplicity {
                irrep: row.name.clone(),
                multiplicity: m as i64,
                residual,
            });
        }
    }
    Ok(out)
}

/// Renders a decomposition as e.g. `A1 + E - 2B`.
pub fn format_decomposition(parts: &[IrrepMultiplicity]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        let sign = if p.multiplicity < 0 { "-" } else { "+" };
        let mag = p.multiplicity.unsigned_abs();
        let coef = if mag == 1 { String::new() } else { mag.to_string() };
        if i == 0 {
            if p.multiplicity < 0 {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        s.push_str(&format!("{coef}{}", p.irrep));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::Dimension;
    use crate::symdetect::{catalog_labels, reference_group};

    fn table(dim: Dimension, label: &str) -> CharacterTable {
        character_table(&reference_group(dim, label).unwrap()).unwrap()
    }

    #[test]
    fn every_catalog_table_is_orthogonal_and_complete() {
        for dim in [Dimension::Two, Dimension::Three] {
            for label in catalog_labels(dim) {
                let t = table(dim, &label);
                assert!(t.is_orthogonal(1e-9), "{label}");
                let squares: usize = t
                    .rows
                    .iter()
                    .map(|r| r.irreducible_dimension().pow(2) * if r.complex_pair { 2 } else { 1 })
                    .sum();
                assert_eq!(squares, t.order, "{label}");
                let names: std::collections::HashSet<_> = t.rows.iter().map(|r| &r.name).collect();
                assert_eq!(names.len(), t.rows.len(), "{label}: duplicate names");
            }
        }
    }

    #[test]
    fn c3v_table() {
        let t = table(Dimension::Two, "C3v");
        let names: Vec<_> = t.rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["A1", "A2", "E"]);
        assert_eq!(t.rows[2].values, vec![2.0, -1.0, 0.0]);
    }

    #[test]
    fn triangle_joint_representation() {
        let t = table(Dimension::Two, "C3v");
        let gamma = TraceVector::from_values("C3v", &t.class_labels, &t.class_sizes, vec![3.0, 0.0, 1.0]);
        let d = decompose_irreps(&gamma, &t).unwrap();
        assert_eq!(format_decomposition(&d), "A1 + E");
    }

    #[test]
    fn icosahedral_table_has_golden_ratio() {
        let t = table(Dimension::Three, "I");
        assert_eq!(t.rows.len(), 5);
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(t.rows.iter().any(|r| r.values.iter().any(|v| (v - tau).abs() < 1e-9)));
    }

    #[test]
    fn cyclic_groups_merge_pairs() {
        let t = table(Dimension::Three, "C3");
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows[1].complex_pair);
        assert_eq!(t.rows[1].values, vec![2.0, -1.0, -1.0]);
    }

    #[test]
    fn zero_trace_decomposes_to_nothing() {
        let t = table(Dimension::Three, "D3");
        let zero = TraceVector::from_values("D3", &t.class_labels, &t.class_sizes, vec![0.0; 3]);
        assert!(decompose_irreps(&zero, &t).unwrap().is_empty());
        let bad = TraceVector::from_values("D3", &t.class_labels, &t.class_sizes, vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            decompose_irreps(&bad, &t),
            Err(MaxwellError::NonIntegralMultiplicity { .. })
        ));
    }

    #[test]
    fn regular_representation() {
        for label in ["C5v", "Oh", "Ih", "S8", "Th"] {
            let t = table(Dimension::Three, label);
            for part in decompose_irreps(&t.regular(), &t).unwrap() {
                let row = t.rows.iter().find(|r| r.name == part.irrep).unwrap();
                assert_eq!(part.multiplicity as usize, row.irreducible_dimension(), "{label}");
            }
        }
    }
}
