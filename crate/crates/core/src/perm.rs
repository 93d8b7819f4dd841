//! Permutations and parity.

/// All permutations of `0..k` paired with their sign (+1 even, −1 odd).
pub fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    permute(&mut current, 0, 1.0, &mut out);
    out
}

fn permute(v: &mut Vec<usize>, start: usize, sign: f64, out: &mut Vec<(Vec<usize>, f64)>) {
    if start + 1 >= v.len() {
        out.push((v.clone(), sign));
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        let s = if i == start { sign } else { -sign };
        permute(v, start + 1, s, out);
        v.swap(start, i);
    }
}

/// Sign of the permutation that sorts `values` ascending; 0 if any value repeats.
pub fn sort_sign(values: &[usize]) -> f64 {
    let mut sign = 1.0;
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            if values[a] == values[b] {
                return 0.0;
            }
            if values[a] > values[b] {
                sign = -sign;
            }
        }
    }
    sign
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_signs() {
        let perms = permutations_with_sign(3);
        assert_eq!(perms.len(), 6);
        for (p, s) in &perms {
            assert_eq!(*s, sort_sign(p));
        }
        assert_eq!(permutations_with_sign(0).len(), 1);
        assert_eq!(sort_sign(&[1, 1]), 0.0);
        assert_eq!(sort_sign(&[2, 0, 1]), 1.0);
        assert_eq!(sort_sign(&[1, 0]), -1.0);
    }
}
