//! Permutation models of the small test groups.

use crate::perm::{GroupHandle, Permutation};

use super::RadicalError;

fn cycles(degree: usize, cs: &[&[usize]]) -> Permutation {
    let cs: Vec<Vec<usize>> = cs.iter().map(|c| c.to_vec()).collect();
    Permutation::from_cycles(degree, &cs).expect("valid cycles")
}

/// `S_n` on `n` points.
pub fn symmetric(n: usize) -> GroupHandle {
    let all: Vec<usize> = (0..n).collect();
    GroupHandle::new(vec![cycles(n, &[&[0, 1]]), cycles(n, &[&all])], 1).expect("same degree")
}

/// `GL(3,2)` on the seven nonzero vectors of `F_2^3`; point `v - 1` is the
/// vector with bit pattern `v`.
pub fn gl32() -> GroupHandle {
    let linear = |cols: [usize; 3]| {
        let images: Vec<usize> = (1..8usize)
            .map(|v| (0..3).filter(|&b| v >> b & 1 == 1).fold(0, |acc, b| acc ^ cols[b]) - 1)
            .collect();
        Permutation::from_images(&images).expect("invertible")
    };
    // multiplication by x in F_8 = F_2[x]/(x^3 + x + 1), and a transvection
    GroupHandle::new(vec![linear([2, 4, 3]), linear([1, 3, 4])], 1).expect("same degree")
}

pub fn c2() -> GroupHandle {
    GroupHandle::new(vec![cycles(2, &[&[0, 1]])], 1).expect("degree 2")
}

pub fn c2_squared() -> GroupHandle {
    GroupHandle::new(vec![cycles(4, &[&[0, 1]]), cycles(4, &[&[2, 3]])], 1).expect("degree 4")
}

/// Names accepted by [`small_group`].
pub const SMALL_GROUPS: [&str; 5] = ["S4", "S5", "GL32", "C2", "C2xC2"];

pub fn small_group(name: &str) -> Result<GroupHandle, RadicalError> {
    match name.to_ascii_uppercase().as_str() {
        "S4" => Ok(symmetric(4)),
        "S5" => Ok(symmetric(5)),
        "GL32" | "GL(3,2)" | "L32" => Ok(gl32()),
        "C2" => Ok(c2()),
        "C2XC2" | "C2^2" | "V4" => Ok(c2_squared()),
        _ => Err(RadicalError::UnknownGroup(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(symmetric(5).order(), 120);
        assert_eq!(gl32().order(), 168);
        assert_eq!(c2().order(), 2);
        assert_eq!(c2_squared().order(), 4);
        assert!(small_group("A7").is_err());
    }
}
