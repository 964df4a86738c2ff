//! Canonical symmetric words and their Koszul signs.
//!
//! A word is a multiset of letter indices stored in nondecreasing order. A
//! letter of odd degree never repeats: its symmetric square vanishes over ℚ.

/// Letters in nondecreasing order.
pub type Word = Vec<usize>;

/// Sorts `letters` into canonical order. Returns the sorted word and the
/// Koszul sign of the permutation, or `None` when an odd letter repeats.
pub fn normalize(mut letters: Vec<usize>, odd: &[bool]) -> Option<(Word, i32)> {
    let mut sign = 1;
    for i in 1..letters.len() {
        let mut j = i;
        while j > 0 && letters[j - 1] > letters[j] {
            if odd[letters[j - 1]] && odd[letters[j]] {
                sign = -sign;
            }
            letters.swap(j - 1, j);
            j -= 1;
        }
    }
    if letters.windows(2).any(|p| p[0] == p[1] && odd[p[0]]) {
        return None;
    }
    Some((letters, sign))
}

/// Koszul sign of moving the letters at the positions in `mask` in front of
/// the others, keeping relative order within each part.
pub fn unshuffle_sign(w: &[usize], mask: u32, odd: &[bool]) -> i32 {
    let mut parity = false;
    let mut odd_outside = 0usize;
    for (pos, &l) in w.iter().enumerate() {
        let inside = mask & (1 << pos) != 0;
        if inside {
            if odd[l] && odd_outside % 2 == 1 {
                parity = !parity;
            }
        } else if odd[l] {
            odd_outside += 1;
        }
    }
    if parity {
        -1
    } else {
        1
    }
}

/// The subwords at the positions in `mask` and at the complementary
/// positions; both are canonical when `w` is.
pub fn split(w: &[usize], mask: u32) -> (Word, Word) {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (pos, &l) in w.iter().enumerate() {
        if mask & (1 << pos) != 0 {
            inside.push(l);
        } else {
            outside.push(l);
        }
    }
    (inside, outside)
}
