use alloc::vec::Vec;

/// Inverse of a small symmetric positive definite matrix (row-major, `n × n`)
/// by Gauss–Jordan elimination with partial pivoting. `None` when a pivot
/// falls below `rel_eps · max|diag|`.
pub(crate) fn invert(mut a: Vec<f64>, n: usize, rel_eps: f64) -> Option<Vec<f64>> {
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut inv = alloc::vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap();
        if a[piv * n + col].abs() <= rel_eps * scale {
            return None;
        }
        if piv != col {
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
                inv.swap(piv * n + j, col * n + j);
            }
        }
        let p = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r * n + col];
                if f != 0.0 {
                    for j in 0..n {
                        a[r * n + j] -= f * a[col * n + j];
                        inv[r * n + j] -= f * inv[col * n + j];
                    }
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn inverts_spd() {
        let inv = invert(vec![4.0, 1.0, 1.0, 3.0], 2, 1e-12).unwrap();
        let det = 11.0;
        let expect = [3.0 / det, -1.0 / det, -1.0 / det, 4.0 / det];
        for (x, y) in inv.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_is_rejected() {
        assert!(invert(vec![1.0, 2.0, 2.0, 4.0], 2, 1e-12).is_none());
    }
}
