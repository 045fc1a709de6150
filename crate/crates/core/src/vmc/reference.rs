use serde::Serialize;

/// Published value with its quoted uncertainty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceValue {
    pub value: f64,
    pub error: f64,
}

const fn r(value: f64, error: f64) -> ReferenceValue {
    ReferenceValue { value, error }
}

/// Nearest-neighbor `sigma^z sigma^z` reference values for one lattice:
/// `[Phi_0 x, Phi_0 y, Phi_1 x, Phi_1 y]` with `r0` at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub n1: usize,
    pub n2: usize,
    pub values: [ReferenceValue; 4],
}

const fn row(n1: usize, n2: usize, values: [ReferenceValue; 4]) -> Table1Row {
    Table1Row { n1, n2, values }
}

pub const TABLE1: [Table1Row; 24] = [
    row(4, 2, [r(-0.173, 0.002), r(-0.946, 0.002), r(-0.455, 0.002), r(0.273, 0.005)]),
    row(4, 4, [r(-0.247, 0.002), r(-0.246, 0.003), r(-0.230, 0.002), r(-0.376, 0.003)]),
    row(4, 6, [r(-0.216, 0.002), r(-0.312, 0.002), r(-0.217, 0.002), r(-0.301, 0.003)]),
    row(4, 8, [r(-0.210, 0.002), r(-0.306, 0.003), r(-0.210, 0.002), r(-0.307, 0.003)]),
    row(6, 2, [r(-0.176, 0.002), r(-0.944, 0.002), r(-0.467, 0.002), r(0.322, 0.005)]),
    row(6, 4, [r(-0.311, 0.002), r(-0.216, 0.003), r(-0.279, 0.002), r(-0.376, 0.003)]),
    row(6, 6, [r(-0.298, 0.002), r(-0.300, 0.003), r(-0.302, 0.002), r(-0.281, 0.003)]),
    row(6, 8, [r(-0.303, 0.002), r(-0.289, 0.003), r(-0.302, 0.002), r(-0.290, 0.003)]),
    row(8, 2, [r(-0.175, 0.002), r(-0.944, 0.002), r(-0.464, 0.002), r(0.335, 0.005)]),
    row(8, 4, [r(-0.306, 0.002), r(-0.210, 0.003), r(-0.275, 0.002), r(-0.382, 0.003)]),
    row(8, 6, [r(-0.290, 0.002), r(-0.303, 0.003), r(-0.292, 0.002), r(-0.281, 0.003)]),
    row(8, 8, [r(-0.291, 0.002), r(-0.291, 0.002), r(-0.290, 0.002), r(-0.293, 0.003)]),
    row(4, 3, [r(-0.230, 0.002), r(-0.241, 0.003), r(-0.301, 0.002), r(-0.241, 0.003)]),
    row(4, 5, [r(-0.229, 0.002), r(-0.301, 0.003), r(-0.221, 0.002), r(-0.301, 0.003)]),
    row(4, 7, [r(-0.213, 0.002), r(-0.305, 0.003), r(-0.213, 0.002), r(-0.305, 0.003)]),
    row(4, 9, [r(-0.209, 0.002), r(-0.306, 0.003), r(-0.209, 0.002), r(-0.306, 0.003)]),
    row(6, 3, [r(-0.334, 0.002), r(-0.239, 0.003), r(-0.257, 0.002), r(-0.239, 0.003)]),
    row(6, 5, [r(-0.280, 0.002), r(-0.290, 0.003), r(-0.292, 0.002), r(-0.290, 0.003)]),
    row(6, 7, [r(-0.283, 0.002), r(-0.294, 0.003), r(-0.281, 0.002), r(-0.294, 0.003)]),
    row(6, 9, [r(-0.281, 0.002), r(-0.293, 0.003), r(-0.281, 0.002), r(-0.293, 0.003)]),
    row(8, 3, [r(-0.258, 0.002), r(-0.239, 0.003), r(-0.336, 0.002), r(-0.239, 0.003)]),
    row(8, 5, [r(-0.298, 0.002), r(-0.290, 0.003), r(-0.293, 0.002), r(-0.290, 0.003)]),
    row(8, 7, [r(-0.291, 0.002), r(-0.290, 0.003), r(-0.292, 0.002), r(-0.290, 0.003)]),
    row(8, 9, [r(-0.290, 0.002), r(-0.291, 0.003), r(-0.290, 0.002), r(-0.291, 0.003)]),
];

pub fn table1_reference(n1: usize, n2: usize) -> Option<&'static Table1Row> {
    TABLE1.iter().find(|row| row.n1 == n1 && row.n2 == n2)
}
