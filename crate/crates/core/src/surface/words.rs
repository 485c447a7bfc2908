//! Words in a free group. A letter is a non-zero integer: `g + 1` for the
//! generator with index `g`, `-(g + 1)` for its inverse.

pub type Letter = i16;
pub type Word = Vec<Letter>;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = (generator + 1) as Letter;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| -l).collect()
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Freely and cyclically reduced form (conjugate of the input).
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let r = free_reduce(w);
    let mut lo = 0;
    let mut hi = r.len();
    while hi - lo >= 2 && r[lo] == -r[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    r[lo..hi].to_vec()
}

/// Lexicographically least rotation, with letters ordered a < A < b < B < ...
pub fn min_rotation(w: &[Letter]) -> Word {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let key = |l: Letter| (l.unsigned_abs(), l < 0);
    let mut best = 0;
    for start in 1..n {
        for k in 0..n {
            let a = key(w[(start + k) % n]);
            let b = key(w[(best + k) % n]);
            if a != b {
                if a < b {
                    best = start;
                }
                break;
            }
        }
    }
    (0..n).map(|k| w[(best + k) % n]).collect()
}

fn compare(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    let key = |l: &Letter| (l.unsigned_abs(), *l < 0);
    a.iter().map(key).cmp(b.iter().map(key))
}

/// Canonical key of the conjugacy class of `w`.
pub fn conjugacy_key(w: &[Letter]) -> Word {
    min_rotation(&cyclic_reduce(w))
}

/// Canonical key of the unordered pair {class of w, class of w^-1}, i.e. of an
/// unoriented closed geodesic.
pub fn unoriented_key(w: &[Letter]) -> Word {
    let a = conjugacy_key(w);
    let b = conjugacy_key(&inverse(w));
    if compare(&a, &b) == std::cmp::Ordering::Greater {
        b
    } else {
        a
    }
}

/// Smallest p with w = u^(n/p) for a cyclically reduced w; n/p is the power.
pub fn root_period(w: &[Letter]) -> usize {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]) {
            return p;
        }
    }
    n
}

/// Whether the conjugacy class of w is not a proper power.
pub fn is_primitive(w: &[Letter]) -> bool {
    let c = cyclic_reduce(w);
    !c.is_empty() && root_period(&c) == c.len()
}

/// Letters a, b, c, ... for generators, upper case for inverses.
pub fn format_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter()
        .map(|&l| {
            let g = generator_of(l);
            let c = if g < 26 {
                (b'a' + g as u8) as char
            } else {
                return format!("x{}{}", g, if l < 0 { "'" } else { "" });
            };
            if l < 0 {
                c.to_ascii_uppercase().to_string()
            } else {
                c.to_string()
            }
        })
        .collect()
}

/// Inverse of [`format_word`] for alphabets of at most 26 letters.
pub fn parse_word(s: &str) -> Option<Word> {
    if s == "1" {
        return Some(Vec::new());
    }
    s.chars()
        .map(|c| {
            if c.is_ascii_lowercase() {
                Some(letter((c as u8 - b'a') as usize, false))
            } else if c.is_ascii_uppercase() {
                Some(letter((c as u8 - b'A') as usize, true))
            } else {
                None
            }
        })
        .collect()
}
