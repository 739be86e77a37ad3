//! Points and axis-aligned cells.

use crate::error::{Error, Result};

/// A data point. `index` is its position in the insertion order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
    pub index: usize,
}

impl Point2 {
    pub fn new(x: f64, y: f64, index: usize) -> Self {
        Point2 { x, y, index }
    }

    /// Points from coordinate pairs, indexed in order.
    pub fn from_coords(coords: &[(f64, f64)]) -> Vec<Point2> {
        coords
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Point2::new(x, y, i))
            .collect()
    }
}

/// Axis-aligned rectangle `[x0, x1) × [y0, y1)`.
///
/// Extents are half-open on the high side; a cell whose high side lies on
/// the boundary of the enclosing domain is closed there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Cell {
    pub const UNIT: Cell = Cell {
        x0: 0.0,
        x1: 1.0,
        y0: 0.0,
        y1: 1.0,
    };

    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain {
                name: "cell extent",
                value: if x0 < x1 { y1 - y0 } else { x1 - x0 },
                domain: "(0, inf)",
            });
        }
        Ok(Cell { x0, x1, y0, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Whether the vertical line `x = s` meets this cell. `domain_x1` is the
    /// right edge of the enclosing domain, where cells are closed.
    #[inline]
    pub fn meets_vertical(&self, s: f64, domain_x1: f64) -> bool {
        (self.x0 <= s && s < self.x1) || (s == self.x1 && self.x1 == domain_x1)
    }

    /// Whether `(x, y)` lies in the closed rectangle.
    pub fn contains_closed(&self, x: f64, y: f64) -> bool {
        self.x0 <= x && x <= self.x1 && self.y0 <= y && y <= self.y1
    }

    pub fn left_of(&self, x: f64) -> Cell {
        Cell { x1: x, ..*self }
    }

    pub fn right_of(&self, x: f64) -> Cell {
        Cell { x0: x, ..*self }
    }

    pub fn below(&self, y: f64) -> Cell {
        Cell { y1: y, ..*self }
    }

    pub fn above(&self, y: f64) -> Cell {
        Cell { y0: y, ..*self }
    }
}

/// Rejects inputs where two points share an x- or a y-coordinate, or where
/// a point falls outside `bounds`.
pub(crate) fn check_general_position(points: &[Point2], bounds: &Cell) -> Result<()> {
    if let Some(p) = points.iter().find(|p| !bounds.contains_closed(p.x, p.y)) {
        return Err(Error::OutOfBounds { x: p.x, y: p.y });
    }
    for axis in ['x', 'y'] {
        let mut coords: Vec<f64> = points
            .iter()
            .map(|p| if axis == 'x' { p.x } else { p.y })
            .collect();
        coords.sort_unstable_by(f64::total_cmp);
        if let Some(w) = coords.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCoordinate { axis, value: w[0] });
        }
    }
    Ok(())
}
