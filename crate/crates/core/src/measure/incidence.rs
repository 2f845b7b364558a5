use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::numeric::matrix::QMatrix;
use crate::numeric::rational::{q, Q};
use crate::ribbon::{boundary_cycles, RibbonGraph};

/// `A L = rhs`, `L ≥ 0`: one row per boundary label (row `k - 1` for label
/// `k`), one column per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub matrix: Vec<Vec<i64>>,
    #[serde(with = "crate::io::serde_q::vec")]
    pub rhs: Vec<Q>,
}

impl ConstraintSystem {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn with_rhs(&self, rhs: Vec<Q>) -> ConstraintSystem {
        assert_eq!(rhs.len(), self.rows());
        ConstraintSystem {
            matrix: self.matrix.clone(),
            rhs,
        }
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_int_rows(&self.matrix)
    }

    pub fn column_sums(&self) -> Vec<i64> {
        (0..self.cols())
            .map(|j| self.matrix.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// Whether `L` satisfies `A L = rhs` and `L ≥ 0`.
    pub fn contains(&self, l: &[Q]) -> bool {
        l.iter().all(|x| x >= &Q::zero())
            && self.matrix.iter().zip(&self.rhs).all(|(row, b)| {
                row.iter().zip(l).fold(Q::zero(), |acc, (a, x)| acc + q(*a) * x) == *b
            })
    }
}

pub fn incidence_matrix(g: &RibbonGraph) -> ConstraintSystem {
    let edge = g.edge_index();
    let n0 = g.boundary_count();
    let mut matrix = vec![vec![0i64; g.edge_count()]; n0];
    let mut rhs = vec![Q::zero(); n0];
    for c in boundary_cycles(g) {
        let row = c.label as usize - 1;
        for &d in &c.darts {
            matrix[row][edge[d]] += 1;
        }
        rhs[row] = q(c.sides() as i64);
    }
    ConstraintSystem { matrix, rhs }
}
