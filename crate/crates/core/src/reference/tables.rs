//! Published reference values, copied verbatim.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroFieldLevel {
    pub n: u32,
    pub computed: f64,
    pub analytic: f64,
}

/// Zero-field levels: published numerical and analytic columns.
pub const TABLE1: &[ZeroFieldLevel] = &[
    ZeroFieldLevel {
        n: 1,
        computed: -2.00000000,
        analytic: -2.00000000,
    },
    ZeroFieldLevel {
        n: 2,
        computed: -0.22222222,
        analytic: -0.22222222,
    },
    ZeroFieldLevel {
        n: 3,
        computed: -0.08000000,
        analytic: -0.08000000,
    },
    ZeroFieldLevel {
        n: 4,
        computed: -0.04081633,
        analytic: -0.04081632,
    },
    ZeroFieldLevel {
        n: 5,
        computed: -0.02469136,
        analytic: -0.02469136,
    },
    ZeroFieldLevel {
        n: 6,
        computed: -0.01652892,
        analytic: -0.01652892,
    },
    ZeroFieldLevel {
        n: 7,
        computed: -0.01183432,
        analytic: -0.01183432,
    },
    ZeroFieldLevel {
        n: 8,
        computed: -0.00888889,
        analytic: -0.00888889,
    },
    ZeroFieldLevel {
        n: 9,
        computed: -0.00692042,
        analytic: -0.00692042,
    },
    ZeroFieldLevel {
        n: 10,
        computed: -0.00554016,
        analytic: -0.00554017,
    },
];

/// Zero-field dipole elements `d_{n1}` for `n = 2..=5`.
pub const TABLE2: &[(u32, f64)] = &[
    (2, 0.34445950),
    (3, 0.14087514),
    (4, 0.08223128),
    (5, 0.05564053),
];

/// Ground energy at `alpha = 0`, infinite proton mass: `(B, E)`.
pub const TABLE3: &[(f64, f64)] = &[
    (0.1, -1.999531),
    (0.25, -1.997079),
    (107.0 / 250.0, -1.991491),
    (1.0, -1.955159),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiExactRow {
    pub n: u32,
    pub l: i32,
    pub b: f64,
    pub energy: f64,
}

const fn qe(n: u32, l: i32, b: f64, energy: f64) -> QuasiExactRow {
    QuasiExactRow { n, l, b, energy }
}

/// Quasi-exact levels with `l = 0`.
pub const TABLE4: &[QuasiExactRow] = &[
    qe(2, 0, 4.0, 4.0000000),
    qe(3, 0, 0.6666666, 1.0000000),
    qe(4, 0, 0.2157031, 0.4314064),
    qe(3, 0, 2.7472602, 5.4945207),
    qe(5, 0, 0.0947113, 0.2367785),
    qe(4, 0, 0.5150444, 1.2876109),
    qe(6, 0, 0.0496114, 0.1488343),
    qe(5, 0, 0.1776672, 0.5330021),
    qe(4, 0, 2.1513889, 6.4541668),
    qe(10, 0, 0.0088435, 0.0442177),
];

/// Quasi-exact levels with `l = 1`.
pub const TABLE5: &[QuasiExactRow] = &[
    qe(2, 1, 1.3333333, 2.6666667),
    qe(3, 1, 0.2857142, 0.7142857),
    qe(4, 1, 0.1102572, 0.3307717),
    qe(3, 1, 1.0749278, 3.2247835),
    qe(5, 1, 0.0545241, 0.1907883),
    qe(4, 1, 0.2395487, 0.8384207),
    qe(6, 1, 0.0311049, 0.1244197),
    qe(5, 1, 0.0951651, 0.3806606),
    qe(4, 1, 0.9151684, 3.6606737),
    qe(7, 1, 0.0194448, 0.0875018),
    qe(10, 1, 0.0066281, 0.0397691),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedRow {
    pub b: f64,
    pub alpha_degrees: f64,
    pub infinite: f64,
    pub finite: f64,
}

const fn tr(b: f64, alpha_degrees: f64, infinite: f64, finite: f64) -> TiltedRow {
    TiltedRow {
        b,
        alpha_degrees,
        infinite,
        finite,
    }
}

/// Ground energy in a tilted field, both mass models.
pub const TABLE6: &[TiltedRow] = &[
    tr(0.0, 0.0, -2.00000000, -1.99891136),
    tr(1.0, 0.0, -1.95515969, -1.95400154),
    tr(1.0, 45.0, -1.96609353, -1.96495184),
    tr(1.0, 90.0, -1.97736937, -1.97624499),
    tr(1.5, 0.0, -1.90335296, -1.90212093),
    tr(1.5, 45.0, -1.92643285, -1.92523340),
    tr(1.5, 90.0, -1.95085064, -1.94968360),
    tr(4.0, 0.0, -1.45958714, -1.45782964),
    tr(4.0, 45.0, -1.57808514, -1.57646979),
    tr(4.0, 90.0, -1.71786453, -1.71556932),
];
