use crate::graph::Graph;
use crate::pathspace::BoundaryPoint;

use super::TableError;

/// A groupoid element `(x, k, y)`: `shift^m x == shift^n y` with
/// `k = m - n`. Tables act on it by moving `y` to `x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrow {
    pub x: BoundaryPoint,
    pub lag: i64,
    pub y: BoundaryPoint,
}

fn point_len(p: &BoundaryPoint) -> Option<usize> {
    match p {
        BoundaryPoint::Finite(q) => Some(q.len()),
        BoundaryPoint::Periodic { .. } => None,
    }
}

fn shape(p: &BoundaryPoint) -> (usize, usize) {
    match p {
        BoundaryPoint::Finite(q) => (q.len(), 1),
        BoundaryPoint::Periodic { prefix, cycle } => (prefix.len(), cycle.len()),
    }
}

impl Arrow {
    pub fn new(g: &Graph, x: BoundaryPoint, lag: i64, y: BoundaryPoint) -> Result<Arrow, TableError> {
        let ar = Arrow { x, lag, y };
        ar.alignment(g).ok_or(TableError::InvalidArrow)?;
        Ok(ar)
    }

    /// The least `(m, n)` with `shift^m x == shift^n y` and `m - n = lag`.
    pub fn alignment(&self, g: &Graph) -> Option<(usize, usize)> {
        let (px, cx) = shape(&self.x);
        let (py, cy) = shape(&self.y);
        let bound = px + py + self.lag.unsigned_abs() as usize + cx * cy + 2;
        for n in 0..=bound {
            let m = n as i64 + self.lag;
            if m < 0 {
                continue;
            }
            let m = m as usize;
            if point_len(&self.x).is_some_and(|l| m > l) || point_len(&self.y).is_some_and(|l| n > l) {
                break;
            }
            if self.x.drop_edges(g, m).ok()? == self.y.drop_edges(g, n).ok()? {
                return Some((m, n));
            }
        }
        None
    }

    pub fn render(&self, g: &Graph) -> String {
        format!("({} | {} | {})", self.x.render(g), self.lag, self.y.render(g))
    }
}
