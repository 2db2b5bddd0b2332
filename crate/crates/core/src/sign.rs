//! The single Koszul sign routine. Every sign produced by reordering graded
//! objects in this crate goes through [`koszul_odd`].

/// Returns `true` when reordering items with the given parities by `perm`
/// produces a minus sign. `perm[t]` is the original position of the item
/// that ends up at position `t`. Only pairs of odd items that change relative
/// order contribute.
pub fn koszul_odd(parities: &[bool], perm: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..perm.len() {
        for b in (a + 1)..perm.len() {
            if perm[a] > perm[b] && parities[perm[a]] && parities[perm[b]] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Sign of a plain permutation (all items odd).
pub fn permutation_odd(perm: &[usize]) -> bool {
    let all = vec![true; perm.len()];
    koszul_odd(&all, perm)
}

/// Parity of an integer degree.
pub fn parity(degree: i32) -> bool {
    degree.rem_euclid(2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_of_odd_items() {
        assert!(koszul_odd(&[true, true], &[1, 0]));
        assert!(!koszul_odd(&[true, false], &[1, 0]));
        assert!(!koszul_odd(&[true, true, true], &[0, 1, 2]));
        // cyclic 3-cycle of odd items is even
        assert!(!koszul_odd(&[true, true, true], &[1, 2, 0]));
    }

    #[test]
    fn permutation_signs() {
        assert!(permutation_odd(&[1, 0, 2]));
        assert!(!permutation_odd(&[2, 0, 1]));
        assert!(parity(-5));
        assert!(!parity(-6));
    }
}
