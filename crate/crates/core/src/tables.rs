//! Reference values, four decimals for the subsequence tables and
//! three for the central-value tables. Row index is the digit.

/// `P(d, 10^m - 1, 2)` for `m = 2..=5`, then `α(d, 2)`.
pub const SUBSEQ_P2: [[f64; 5]; 10] = [
    [0.1330, 0.1144, 0.1123, 0.1121, 0.1121],
    [0.1190, 0.1103, 0.1092, 0.1091, 0.1091],
    [0.1107, 0.1068, 0.1063, 0.1062, 0.1062],
    [0.1044, 0.1037, 0.1035, 0.1035, 0.1035],
    [0.0991, 0.1007, 0.1009, 0.1009, 0.1009],
    [0.0945, 0.0979, 0.0983, 0.0984, 0.0984],
    [0.0903, 0.0953, 0.0958, 0.0959, 0.0959],
    [0.0865, 0.0927, 0.0935, 0.0936, 0.0936],
    [0.0829, 0.0902, 0.0912, 0.0913, 0.0913],
    [0.0796, 0.0879, 0.0889, 0.0891, 0.0891],
];

/// `P(d, 10^m - 1, 3)` for `m = 3..=5`, then `α(d, 3)`.
pub const SUBSEQ_P3: [[f64; 4]; 10] = [
    [0.1045, 0.1015, 0.1012, 0.1012],
    [0.1028, 0.1011, 0.1009, 0.1009],
    [0.1017, 0.1008, 0.1007, 0.1006],
    [0.1008, 0.1004, 0.1004, 0.1004],
    [0.1000, 0.1001, 0.1001, 0.1001],
    [0.0993, 0.0998, 0.0999, 0.0999],
    [0.0986, 0.0995, 0.0996, 0.0996],
    [0.0980, 0.0992, 0.0993, 0.0994],
    [0.0974, 0.0989, 0.0991, 0.0991],
    [0.0968, 0.0986, 0.0988, 0.0989],
];

/// Window index of [`WINDOW_P2`].
pub const WINDOW_P2_INDEX: u64 = 7;

/// `P(d, (10·7 + d + 1)·10^(m-1) - 1, 2)` for `m = 2..=5`, then `α(d, 2, 7)`.
pub const WINDOW_P2: [[f64; 5]; 10] = [
    [0.1182, 0.1152, 0.1148, 0.1148, 0.1148],
    [0.1127, 0.1111, 0.1109, 0.1109, 0.1109],
    [0.1082, 0.1074, 0.1073, 0.1073, 0.1073],
    [0.1042, 0.1040, 0.1040, 0.1040, 0.1039],
    [0.1006, 0.1008, 0.1008, 0.1008, 0.1008],
    [0.0973, 0.0978, 0.0979, 0.0979, 0.0979],
    [0.0942, 0.0950, 0.0951, 0.0951, 0.0951],
    [0.0913, 0.0923, 0.0924, 0.0925, 0.0925],
    [0.0886, 0.0898, 0.0899, 0.0900, 0.0900],
    [0.0860, 0.0874, 0.0876, 0.0876, 0.0876],
];

/// Window index of [`WINDOW_P3`].
pub const WINDOW_P3_INDEX: u64 = 23;

/// `P(d, (10·23 + d + 1)·10^(m-2) - 1, 3)` for `m = 3..=5`, then `α(d, 3, 23)`.
pub const WINDOW_P3: [[f64; 4]; 10] = [
    [0.1037, 0.1023, 0.1022, 0.1021],
    [0.1026, 0.1018, 0.1017, 0.1017],
    [0.1017, 0.1012, 0.1012, 0.1012],
    [0.1009, 0.1007, 0.1007, 0.1007],
    [0.1007, 0.1002, 0.1002, 0.1002],
    [0.0995, 0.0997, 0.0997, 0.0997],
    [0.0988, 0.0992, 0.0993, 0.0993],
    [0.0982, 0.0987, 0.0988, 0.0988],
    [0.0976, 0.0983, 0.0983, 0.0983],
    [0.0969, 0.0978, 0.0979, 0.0979],
];

/// `C(d, 2)` and Hill's second-digit probability.
pub const CENTRAL_P2: [[f64; 2]; 10] = [
    [0.1170, 0.1197],
    [0.1122, 0.1139],
    [0.1079, 0.1088],
    [0.1039, 0.1043],
    [0.1001, 0.1003],
    [0.0967, 0.0967],
    [0.0935, 0.0934],
    [0.0905, 0.0904],
    [0.0878, 0.0876],
    [0.0851, 0.0850],
];

/// `C(d, 3)` and Hill's third-digit probability.
pub const CENTRAL_P3: [[f64; 2]; 10] = [
    [0.1016, 0.1018],
    [0.1013, 0.1014],
    [0.1009, 0.1010],
    [0.1005, 0.1006],
    [0.1002, 0.1002],
    [0.0998, 0.0998],
    [0.0994, 0.0994],
    [0.0991, 0.0990],
    [0.0987, 0.0986],
    [0.0984, 0.0983],
];

/// Reference central value `C(0, 2)`.
pub const CENTRAL_0_2: f64 = 0.1170;

/// `(n, p, d, P)` worked examples.
pub const WORKED_EXAMPLES: [(u64, u32, u32, f64); 3] = [
    (10003, 5, 2, 0.1458),
    (1113, 3, 1, 0.1028),
    (212, 2, 9, 0.0759),
];

/// Subsequence reference for position `p`: first `m`, and rows of
/// `P` at `m, m+1, ...` followed by the limit.
pub fn subsequence(p: u32) -> Option<(u32, Vec<Vec<f64>>)> {
    match p {
        2 => Some((2, SUBSEQ_P2.iter().map(|r| r.to_vec()).collect())),
        3 => Some((3, SUBSEQ_P3.iter().map(|r| r.to_vec()).collect())),
        _ => None,
    }
}

/// Window reference for position `p`: window index, first `m`, and rows.
pub fn window(p: u32) -> Option<(u64, u32, Vec<Vec<f64>>)> {
    match p {
        2 => Some((
            WINDOW_P2_INDEX,
            2,
            WINDOW_P2.iter().map(|r| r.to_vec()).collect(),
        )),
        3 => Some((
            WINDOW_P3_INDEX,
            3,
            WINDOW_P3.iter().map(|r| r.to_vec()).collect(),
        )),
        _ => None,
    }
}

/// Central-value reference `[C, Hill]` rows for position `p`.
pub fn central(p: u32) -> Option<&'static [[f64; 2]; 10]> {
    match p {
        2 => Some(&CENTRAL_P2),
        3 => Some(&CENTRAL_P3),
        _ => None,
    }
}
