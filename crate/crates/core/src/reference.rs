//! Printed reference values used by the verification suite and the tests.
//!
//! Cells believed to be misprints carry a `suspect` note; they are reported
//! but excluded from pass/fail comparisons. The reasoning behind every flag
//! is recorded next to the data.

/// One row of a pulse-parameter table (`k = 1`, `gamma = 1/4`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseRow {
    pub gate: &'static str,
    pub tau_over_2pi: f64,
    pub omega: f64,
    /// `h~1x, h~2x, h~1y, h~2y`.
    pub amplitudes: [f64; 4],
    pub phi_x: f64,
    pub phi_y: f64,
    /// Formula value replacing a printed cell that contradicts the
    /// duration/amplitude relations.
    pub formula_override: [Option<f64>; 4],
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

fn row(
    gate: &'static str,
    tau: f64,
    omega: f64,
    amplitudes: [f64; 4],
    phi_x: f64,
    phi_y: f64,
) -> PulseRow {
    PulseRow {
        gate,
        tau_over_2pi: tau,
        omega,
        amplitudes,
        phi_x,
        phi_y,
        formula_override: [None; 4],
    }
}

/// Static-axis SF parameters.
pub fn table3_rows() -> Vec<PulseRow> {
    vec![
        row("X1", 8.0, 1.0, [0.0, 0.0, -0.0625000, -0.0156250], 0.0, 0.0),
        row(
            "X2",
            128.0,
            0.25,
            [0.0, 0.0, -0.0156250, -0.0039063],
            0.0,
            0.0,
        ),
        row("Y1", 8.0, 1.0, [0.0625000, 0.0156250, 0.0, 0.0], 0.0, 0.0),
        row(
            "Y2",
            128.0,
            0.25,
            [0.0156250, 0.0039063, 0.0, 0.0],
            0.0,
            0.0,
        ),
        row("X1'", 8.0, 1.0, [0.0, 0.0, 0.1119186, 0.0279796], 0.0, 0.0),
        row(
            "X2'",
            128.0,
            0.25,
            [0.0, 0.0, 0.0890262, 0.0222565],
            0.0,
            0.0,
        ),
        row(
            "Y1'",
            8.0,
            1.0,
            [-0.1119186, -0.0279796, 0.0, 0.0],
            0.0,
            0.0,
        ),
        row("X1''", 8.0, 1.0, [0.0, 0.0, 0.1744186, 0.0436046], 0.0, 0.0),
        row(
            "X2''",
            128.0,
            0.25,
            [0.0, 0.0, 0.1046512, 0.0261628],
            0.0,
            0.0,
        ),
    ]
}

/// Rotating SF parameters. The spin-2 amplitudes of `Y1`, `X2`, `Y2` and
/// `X2''` contradict the amplitude formula (and the static-axis table, which
/// is exactly twice the rotating one everywhere else); the formula values are
/// asserted instead.
pub fn table4_rows() -> Vec<PulseRow> {
    let mut rows = vec![
        row(
            "X1",
            8.0,
            1.0,
            [-0.0312500, -0.0078125, -0.0312500, -0.0078125],
            -HALF_PI,
            0.0,
        ),
        row(
            "X2",
            128.0,
            0.25,
            [-0.0078125, -0.0039063, -0.0078125, -0.0039063],
            -HALF_PI,
            0.0,
        ),
        row(
            "Y1",
            8.0,
            1.0,
            [0.0312500, 0.0156250, 0.0312500, 0.0156250],
            0.0,
            HALF_PI,
        ),
        row(
            "Y2",
            128.0,
            0.25,
            [0.0078125, 0.0039063, 0.0078125, 0.0039063],
            0.0,
            HALF_PI,
        ),
        row(
            "X1'",
            8.0,
            1.0,
            [0.0559593, 0.0139898, 0.0559593, 0.0139898],
            -HALF_PI,
            0.0,
        ),
        row(
            "X2'",
            128.0,
            0.25,
            [0.0445131, 0.0111283, 0.0445131, 0.0111283],
            -HALF_PI,
            0.0,
        ),
        row(
            "Y1'",
            8.0,
            1.0,
            [-0.0559593, -0.0139898, -0.0559593, -0.0139898],
            0.0,
            HALF_PI,
        ),
        row(
            "X1''",
            8.0,
            1.0,
            [0.0872093, 0.0218023, 0.0872093, 0.0218023],
            -HALF_PI,
            0.0,
        ),
        row(
            "X2''",
            128.0,
            0.25,
            [0.0523256, 0.0130914, 0.0523256, 0.0130914],
            -HALF_PI,
            0.0,
        ),
    ];
    let quarter_over_128 = 0.25 / 128.0;
    let x2pp = (0.25_f64 / (-2.0 * -0.43e-6)).rem_euclid(2.0) / 128.0;
    for r in rows.iter_mut() {
        let over = match r.gate {
            "Y1" => Some(0.0078125),
            "X2" => Some(-quarter_over_128),
            "Y2" => Some(quarter_over_128),
            "X2''" => Some(x2pp),
            _ => None,
        };
        if let Some(v) = over {
            r.formula_override[1] = Some(v);
            r.formula_override[3] = Some(v);
        }
    }
    rows
}

/// Input of a printed result row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowInput {
    Basis([u8; 2]),
    Singlet,
    GroverItem(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub label: &'static str,
    pub input: RowInput,
    pub ideal: (f64, f64),
    pub cells: Vec<(f64, f64)>,
    /// `(column index, 0 for a / 1 for b, reason)`.
    pub suspect: Vec<(usize, usize, &'static str)>,
}

impl ResultRow {
    pub fn is_suspect(&self, col: usize, which: usize) -> Option<&'static str> {
        self.suspect
            .iter()
            .find(|(c, w, _)| *c == col && *w == which)
            .map(|(_, _, r)| *r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrintedTable {
    pub name: &'static str,
    pub caption: &'static str,
    /// Column labels (`s` values, or `tau/2pi` of `I'` for the perturbation table).
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
}

/// Column subscripts `s = 2kMN^2` of the result tables.
pub const S_VALUES: [u64; 5] = [8, 16, 32, 64, 256];

/// Offsets of the `I'` duration in the perturbation table.
pub const TAU_OFFSETS: [f64; 5] = [-0.2, -0.1, 0.0, 0.1, 0.2];

fn cnot_rows(cells: [[f64; 10]; 5]) -> Vec<ResultRow> {
    let inputs = [
        ("(CNOT)^5|00>", RowInput::Basis([0, 0]), (0.0, 0.0)),
        ("(CNOT)^5|10>", RowInput::Basis([1, 0]), (1.0, 1.0)),
        ("(CNOT)^5|01>", RowInput::Basis([0, 1]), (0.0, 1.0)),
        ("(CNOT)^5|11>", RowInput::Basis([1, 1]), (1.0, 0.0)),
        ("Y1 (CNOT)^5|singlet>", RowInput::Singlet, (1.0, 1.0)),
    ];
    inputs
        .into_iter()
        .zip(cells)
        .map(|((label, input, ideal), c)| ResultRow {
            label,
            input,
            ideal,
            cells: c.chunks(2).map(|p| (p[0], p[1])).collect(),
            suspect: Vec::new(),
        })
        .collect()
}

fn grover_rows(cells: [[f64; 10]; 4]) -> Vec<ResultRow> {
    let ideal = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
    let labels = ["item 0", "item 1", "item 2", "item 3"];
    cells
        .into_iter()
        .enumerate()
        .map(|(i, c)| ResultRow {
            label: labels[i],
            input: RowInput::GroverItem(i),
            ideal: ideal[i],
            cells: c.chunks(2).map(|p| (p[0], p[1])).collect(),
            suspect: Vec::new(),
        })
        .collect()
}

fn s_columns() -> Vec<String> {
    S_VALUES.iter().map(|s| s.to_string()).collect()
}

const GROVER_256: &str =
    "s=256 entry contradicts the ideal answer and the s<=64 trend (suspected row transposition)";

fn flag_grover_256(rows: &mut [ResultRow]) {
    for item in [1, 3] {
        rows[item].suspect.push((4, 0, GROVER_256));
        rows[item].suspect.push((4, 1, GROVER_256));
    }
}

pub fn table5() -> PrintedTable {
    PrintedTable {
        name: "table5",
        caption: "Five CNOT_1 operations, rotating SFs",
        columns: s_columns(),
        rows: cnot_rows([
            [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
            [1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00],
            [0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00],
            [1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00],
            [0.90, 1.00, 0.03, 1.00, 0.58, 1.00, 0.88, 1.00, 0.99, 1.00],
        ]),
    }
}

pub fn table6() -> PrintedTable {
    PrintedTable {
        name: "table6",
        caption: "Five CNOT_2 operations, rotating SFs",
        columns: s_columns(),
        rows: cnot_rows([
            [0.24, 0.76, 0.50, 0.26, 0.20, 0.07, 0.06, 0.02, 0.00, 0.00],
            [0.76, 0.24, 0.50, 0.74, 0.80, 0.93, 0.95, 0.98, 1.00, 1.00],
            [0.24, 0.24, 0.51, 0.74, 0.20, 0.93, 0.06, 0.98, 0.00, 1.00],
            [0.76, 0.76, 0.50, 0.26, 0.80, 0.07, 0.95, 0.02, 1.00, 0.00],
            [0.98, 0.24, 0.95, 0.74, 0.98, 0.93, 0.99, 0.98, 1.00, 1.00],
        ]),
    }
}

pub fn table7() -> PrintedTable {
    PrintedTable {
        name: "table7",
        caption: "Five CNOT_3 operations, rotating SFs",
        columns: s_columns(),
        rows: cnot_rows([
            [0.23, 0.76, 0.50, 0.26, 0.20, 0.07, 0.06, 0.02, 0.00, 0.00],
            [0.77, 0.24, 0.50, 0.74, 0.80, 0.93, 0.95, 0.98, 1.00, 1.00],
            [0.23, 0.24, 0.51, 0.74, 0.20, 0.93, 0.06, 0.98, 0.00, 1.00],
            [0.77, 0.76, 0.50, 0.26, 0.80, 0.07, 0.95, 0.02, 1.00, 0.00],
            [0.79, 0.24, 0.55, 0.74, 0.82, 0.93, 0.95, 0.98, 1.00, 1.00],
        ]),
    }
}

pub fn table8() -> PrintedTable {
    PrintedTable {
        name: "table8",
        caption: "Five CNOT_1 operations, static-axis SFs",
        columns: s_columns(),
        rows: cnot_rows([
            [0.00, 0.03, 0.00, 0.01, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
            [1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00],
            [0.00, 0.97, 0.00, 0.99, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00],
            [1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00],
            [0.02, 0.98, 0.45, 1.00, 0.17, 1.00, 0.70, 1.00, 0.98, 1.00],
        ]),
    }
}

pub fn table9() -> PrintedTable {
    let mut rows = grover_rows([
        [0.48, 0.53, 0.15, 0.16, 0.04, 0.04, 0.01, 0.01, 0.00, 0.00],
        [0.52, 0.50, 0.85, 0.15, 0.96, 0.04, 0.99, 0.01, 1.00, 1.00],
        [0.55, 0.48, 0.15, 0.84, 0.04, 0.96, 0.01, 0.99, 0.00, 1.00],
        [0.45, 0.50, 0.85, 0.85, 0.96, 0.96, 0.99, 0.99, 1.00, 0.00],
    ]);
    flag_grover_256(&mut rows);
    PrintedTable {
        name: "table9",
        caption: "Grover search, rotating SFs",
        columns: s_columns(),
        rows,
    }
}

pub fn grover_static() -> PrintedTable {
    let mut rows = grover_rows([
        [0.92, 0.91, 0.39, 0.35, 0.11, 0.10, 0.03, 0.03, 0.00, 0.00],
        [0.09, 0.91, 0.61, 0.36, 0.89, 0.10, 0.97, 0.03, 1.00, 1.00],
        [0.95, 0.10, 0.36, 0.65, 0.10, 0.90, 0.03, 0.98, 0.00, 1.00],
        [0.05, 0.09, 0.64, 0.64, 0.90, 0.90, 0.97, 0.97, 1.00, 0.00],
    ]);
    flag_grover_256(&mut rows);
    PrintedTable {
        name: "grover-static",
        caption: "Grover search, static-axis SFs",
        columns: s_columns(),
        rows,
    }
}

/// `I'` duration perturbation, `CNOT_1`, rotating SFs, `s = 256`.
pub fn table10() -> PrintedTable {
    const SWAPPED: &str = "b of the |10>/|11> rows at -0.2 appear exchanged with each other";
    const DIGIT: &str =
        "0.09 is inconsistent with the symmetric +0.1 column (0.01); dropped digit suspected";
    const ZERO: &str = "the unperturbed column must equal the s=256 column of the CNOT_1 table";
    let mut rows = cnot_rows([
        [0.00, 0.52, 0.00, 0.16, 0.00, 0.00, 0.00, 0.13, 0.00, 0.48],
        [1.00, 0.48, 1.00, 0.87, 1.00, 1.00, 1.00, 0.84, 1.00, 0.48],
        [0.00, 0.48, 0.00, 0.84, 0.00, 0.00, 0.00, 0.87, 0.00, 0.52],
        [1.00, 0.52, 1.00, 0.13, 1.00, 1.00, 1.00, 0.16, 1.00, 0.52],
        [0.99, 0.50, 0.09, 0.85, 0.99, 1.00, 0.01, 0.85, 0.99, 0.50],
    ]);
    rows[1].suspect.push((0, 1, SWAPPED));
    rows[3].suspect.push((0, 1, SWAPPED));
    rows[4].suspect.push((1, 0, DIGIT));
    rows[2].suspect.push((2, 1, ZERO));
    rows[3].suspect.push((2, 1, ZERO));
    PrintedTable {
        name: "table10",
        caption: "CNOT_1 with perturbed I' duration, rotating SFs, s=256",
        columns: TAU_OFFSETS.iter().map(|o| format!("{o:+.1}")).collect(),
        rows,
    }
}

/// All printed result tables by name.
pub fn printed_table(name: &str) -> Option<PrintedTable> {
    match name {
        "table5" => Some(table5()),
        "table6" => Some(table6()),
        "table7" => Some(table7()),
        "table8" => Some(table8()),
        "table9" => Some(table9()),
        "grover-static" => Some(grover_static()),
        "table10" => Some(table10()),
        _ => None,
    }
}

pub const TABLE_NAMES: [&str; 7] = [
    "table5",
    "table6",
    "table7",
    "table8",
    "table9",
    "grover-static",
    "table10",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        for name in TABLE_NAMES {
            let t = printed_table(name).unwrap();
            assert_eq!(t.columns.len(), 5, "{name}");
            for r in &t.rows {
                assert_eq!(r.cells.len(), 5, "{name} {}", r.label);
            }
        }
        assert!(printed_table("table11").is_none());
    }

    #[test]
    fn static_table_is_twice_rotating_where_consistent() {
        for (s, r) in table3_rows().iter().zip(table4_rows()) {
            assert_eq!(s.gate, r.gate);
            let s_mag = s.amplitudes.iter().map(|x| x.abs()).fold(0.0, f64::max);
            let r_mag = r.amplitudes[0].abs();
            assert!((s_mag - 2.0 * r_mag).abs() < 2e-7, "{}", s.gate);
        }
    }

    #[test]
    fn suspect_lookup() {
        let t = table10();
        assert!(t.rows[4].is_suspect(1, 0).is_some());
        assert!(t.rows[4].is_suspect(1, 1).is_none());
    }
}
