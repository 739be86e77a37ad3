//! 2-d trees: binary search trees on points whose split direction alternates
//! with depth.
//!
//! Query lines are vertical throughout. With a vertical root the root split
//! is parallel to the query line, otherwise perpendicular to it.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{check_general_position, Cell, Point2};
use crate::profile::StepProfile;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Split by the line `x = point.x`.
    Vertical,
    /// Split by the line `y = point.y`.
    Horizontal,
}

impl Axis {
    pub fn flip(self) -> Axis {
        match self {
            Axis::Vertical => Axis::Horizontal,
            Axis::Horizontal => Axis::Vertical,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Vertical => "v",
            Axis::Horizontal => "h",
        })
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Axis> {
        match s {
            "v" | "vertical" => Ok(Axis::Vertical),
            "h" | "horizontal" => Ok(Axis::Horizontal),
            other => Err(Error::InvalidSpec(format!("unknown axis '{other}' (expected v or h)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KdNode {
    point: Point2,
    cell: Cell,
    axis: Axis,
    /// Low side (left or below) first.
    children: [u32; 2],
}

impl KdNode {
    pub fn point(&self) -> &Point2 {
        &self.point
    }

    pub fn cell(&self) -> &Cell {
        &self.cell
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn children(&self) -> [Option<usize>; 2] {
        self.children.map(|c| (c != NONE).then_some(c as usize))
    }

    #[inline]
    fn side(&self, x: f64, y: f64) -> usize {
        match self.axis {
            Axis::Vertical => usize::from(x >= self.point.x),
            Axis::Horizontal => usize::from(y >= self.point.y),
        }
    }

    fn child_cell(&self, side: usize) -> Cell {
        match (self.axis, side) {
            (Axis::Vertical, 0) => self.cell.left_of(self.point.x),
            (Axis::Vertical, _) => self.cell.right_of(self.point.x),
            (Axis::Horizontal, 0) => self.cell.below(self.point.y),
            (Axis::Horizontal, _) => self.cell.above(self.point.y),
        }
    }
}

/// 2-d tree on the unit square, built by insertion in index order.
#[derive(Debug, Clone)]
pub struct KdTree {
    nodes: Vec<KdNode>,
    root_axis: Axis,
}

impl KdTree {
    pub fn build(points: &[Point2], root_axis: Axis) -> Result<Self> {
        check_general_position(points, &Cell::UNIT)?;
        Ok(Self::build_unchecked(points, root_axis))
    }

    pub(crate) fn build_unchecked(points: &[Point2], root_axis: Axis) -> Self {
        let mut tree = KdTree {
            nodes: Vec::with_capacity(points.len()),
            root_axis,
        };
        for p in points {
            tree.insert_unchecked(*p);
        }
        tree
    }

    fn insert_unchecked(&mut self, p: Point2) {
        let new = self.nodes.len() as u32;
        if self.nodes.is_empty() {
            self.nodes.push(KdNode {
                point: p,
                cell: Cell::UNIT,
                axis: self.root_axis,
                children: [NONE; 2],
            });
            return;
        }
        let mut at = 0usize;
        loop {
            let side = self.nodes[at].side(p.x, p.y);
            match self.nodes[at].children[side] {
                NONE => {
                    let parent = &self.nodes[at];
                    let node = KdNode {
                        point: p,
                        cell: parent.child_cell(side),
                        axis: parent.axis.flip(),
                        children: [NONE; 2],
                    };
                    self.nodes[at].children[side] = new;
                    self.nodes.push(node);
                    return;
                }
                next => at = next as usize,
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root_axis(&self) -> Axis {
        self.root_axis
    }

    pub fn nodes(&self) -> &[KdNode] {
        &self.nodes
    }

    /// Nodes visited by the search for `x = s`, whatever the root axis.
    pub fn cost(&self, s: f64) -> Result<u64> {
        self.prefix_cost(self.nodes.len(), s)
    }

    /// Cost in the tree on the first `len` inserted points, which are the
    /// nodes with index below `len`.
    pub fn prefix_cost(&self, len: usize, s: f64) -> Result<u64> {
        crate::error::check_unit("s", s)?;
        let len = len.min(self.nodes.len()) as u32;
        if len == 0 {
            return Ok(0);
        }
        let mut visited = 0;
        let mut stack = vec![0u32];
        while let Some(i) = stack.pop() {
            visited += 1;
            let node = &self.nodes[i as usize];
            match node.axis {
                Axis::Vertical => {
                    let c = node.children[usize::from(s >= node.point.x)];
                    if c < len {
                        stack.push(c);
                    }
                }
                Axis::Horizontal => stack.extend(node.children.iter().filter(|&&c| c < len)),
            }
        }
        Ok(visited)
    }

    fn expect_axis(&self, axis: Axis) -> Result<()> {
        if self.root_axis == axis {
            Ok(())
        } else {
            Err(Error::AxisMismatch {
                expected: match axis {
                    Axis::Vertical => "vertical",
                    Axis::Horizontal => "horizontal",
                },
            })
        }
    }

    /// Cost with the root split parallel to the query line.
    pub fn cost_parallel(&self, s: f64) -> Result<u64> {
        self.expect_axis(Axis::Vertical)?;
        self.cost(s)
    }

    /// Cost with the root split perpendicular to the query line.
    pub fn cost_perp(&self, s: f64) -> Result<u64> {
        self.expect_axis(Axis::Horizontal)?;
        self.cost(s)
    }

    /// Nodes of the subtree at `root` whose cell meets `x = s`, by scanning
    /// the cells.
    fn cell_count(&self, root: u32, s: f64) -> u64 {
        if root == NONE {
            return 0;
        }
        let mut hits = 0;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i as usize];
            if node.cell.meets_vertical(s, 1.0) {
                hits += 1;
            }
            stack.extend(node.children.iter().filter(|&&c| c != NONE));
        }
        hits
    }

    /// Cell-scan count over the whole tree; equals `cost`.
    pub fn crossings(&self, s: f64) -> Result<u64> {
        crate::error::check_unit("s", s)?;
        Ok(if self.nodes.is_empty() { 0 } else { self.cell_count(0, s) })
    }

    pub fn profile(&self) -> StepProfile {
        self.prefix_profile(self.nodes.len())
    }

    pub fn prefix_profile(&self, len: usize) -> StepProfile {
        let nodes = &self.nodes[..len.min(self.nodes.len())];
        StepProfile::from_intervals(0.0, 1.0, nodes.iter().map(|n| (n.cell.x0, n.cell.x1)))
    }

    /// For a horizontal root: checks `cost = 1 + (top subtree) + (bottom subtree)`,
    /// where the subtree terms count cells of the subtrees directly.
    pub fn decomposition_check(&self, s: f64) -> Result<bool> {
        self.expect_axis(Axis::Horizontal)?;
        let root = self.nodes.first().ok_or(Error::EmptyTree)?;
        let parts = 1 + self.cell_count(root.children[0], s) + self.cell_count(root.children[1], s);
        Ok(self.cost_perp(s)? == parts)
    }

    /// For a vertical root: checks `cost = 1 + (subtree of the child whose
    /// x-range contains s)`.
    pub fn vertical_decomposition_check(&self, s: f64) -> Result<bool> {
        self.expect_axis(Axis::Vertical)?;
        let root = self.nodes.first().ok_or(Error::EmptyTree)?;
        let side = usize::from(s >= root.point.x);
        let parts = 1 + self.cell_count(root.children[side], s);
        Ok(self.cost_parallel(s)? == parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadtree::{sample_uniform_points, QuadTree};
    use crate::rng::RngStream;
    use crate::stats::aggregate;
    use proptest::prelude::{any, prop, prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn pts2() -> Vec<Point2> {
        Point2::from_coords(&[(0.5, 0.5), (0.25, 0.75)])
    }

    #[test]
    fn small_vertical_root() {
        let t = KdTree::build(&[], Axis::Vertical).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.cost_parallel(0.2).unwrap(), 0);

        let one = KdTree::build(&pts2()[..1], Axis::Vertical).unwrap();
        let root = &one.nodes()[0];
        assert_eq!(root.child_cell(0), Cell { x0: 0.0, x1: 0.5, y0: 0.0, y1: 1.0 });
        assert_eq!(root.child_cell(1), Cell { x0: 0.5, x1: 1.0, y0: 0.0, y1: 1.0 });
        assert_eq!(one.cost_parallel(0.9).unwrap(), 1);

        let t = KdTree::build(&pts2(), Axis::Vertical).unwrap();
        let second = &t.nodes()[1];
        assert_eq!(t.nodes()[0].children(), [Some(1), None]);
        assert_eq!(second.axis(), Axis::Horizontal);
        assert_eq!(second.cell().x1, 0.5);
        assert_eq!(second.child_cell(0).y1, 0.75);
        assert_eq!(t.cost_parallel(0.3).unwrap(), 2);
        assert_eq!(t.cost_parallel(0.6).unwrap(), 1);
        assert!(t.vertical_decomposition_check(0.3).unwrap());
    }

    #[test]
    fn small_horizontal_root() {
        let one = KdTree::build(&pts2()[..1], Axis::Horizontal).unwrap();
        assert_eq!(one.cost_perp(0.1).unwrap(), 1);
        assert!(one.decomposition_check(0.1).unwrap());
        let t = KdTree::build(&pts2(), Axis::Horizontal).unwrap();
        for s in [0.0, 0.2, 0.25, 0.5, 0.9, 1.0] {
            assert_eq!(t.cost_perp(s).unwrap(), 2);
            assert!(t.decomposition_check(s).unwrap());
        }
        assert_eq!(t.profile().values(), &[2]);
    }

    #[test]
    fn axis_mismatch() {
        let t = KdTree::build(&pts2(), Axis::Horizontal).unwrap();
        assert_eq!(t.cost_parallel(0.3), Err(Error::AxisMismatch { expected: "vertical" }));
        let v = KdTree::build(&pts2(), Axis::Vertical).unwrap();
        assert!(v.cost_perp(0.3).is_err());
        assert!(v.decomposition_check(0.3).is_err());
        let e = KdTree::build(&[], Axis::Horizontal).unwrap();
        assert_eq!(e.decomposition_check(0.3), Err(Error::EmptyTree));
    }

    #[test]
    fn axis_parsing() {
        assert_eq!("v".parse::<Axis>().unwrap(), Axis::Vertical);
        assert_eq!("horizontal".parse::<Axis>().unwrap(), Axis::Horizontal);
        assert!("x".parse::<Axis>().is_err());
        assert_eq!(Axis::Horizontal.to_string(), "h");
    }

    #[test]
    fn mean_sandwich_against_quadtree() {
        // diagnostic: (1/5) E C_n <= E C_n^= <= 2 E C_n, here at n = 500, s = 0.3
        let (n, s, m) = (500, 0.3, 10_000);
        let mut quad = Vec::with_capacity(m);
        let mut par = Vec::with_capacity(m);
        for r in 0..m as u64 {
            let pts = sample_uniform_points(n, &mut RngStream::new(61, r).rng());
            quad.push(QuadTree::build(&pts).unwrap().cost(s).unwrap() as f64);
            let pts = sample_uniform_points(n, &mut RngStream::new(62, r).rng());
            par.push(KdTree::build_unchecked(&pts, Axis::Vertical).cost_parallel(s).unwrap() as f64);
        }
        let (q, p) = (aggregate(&quad).unwrap(), aggregate(&par).unwrap());
        assert!(q.mean / 5.0 - 3.0 * q.std_error <= p.mean + 3.0 * p.std_error);
        assert!(p.mean - 3.0 * p.std_error <= 2.0 * q.mean + 3.0 * q.std_error);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn structure_and_oracles(seed in any::<u64>(), n in 0usize..50, vertical in any::<bool>(),
                                 qs in prop::collection::vec(0.0f64..=1.0, 10)) {
            let axis = if vertical { Axis::Vertical } else { Axis::Horizontal };
            let pts = sample_uniform_points(n, &mut RngStream::new(seed, 0).rng());
            let t = KdTree::build(&pts, axis).unwrap();
            let prof = t.profile();
            for &s in qs.iter().chain(pts.iter().map(|p| &p.x)) {
                let c = t.cost(s).unwrap();
                prop_assert_eq!(c, t.crossings(s).unwrap());
                prop_assert_eq!(c, prof.eval(s).unwrap());
                if n > 0 {
                    let ok = match axis {
                        Axis::Horizontal => t.decomposition_check(s).unwrap(),
                        Axis::Vertical => t.vertical_decomposition_check(s).unwrap(),
                    };
                    prop_assert!(ok);
                }
            }
            let k = n / 2;
            let half = KdTree::build(&pts[..k], axis).unwrap();
            prop_assert_eq!(t.prefix_profile(k), half.profile());
            for &s in &qs {
                prop_assert_eq!(t.prefix_cost(k, s).unwrap(), half.cost(s).unwrap());
            }
            for node in t.nodes() {
                let area = node.child_cell(0).area() + node.child_cell(1).area();
                prop_assert!((area - node.cell().area()).abs() <= 1e-15);
                for (side, c) in node.children().iter().enumerate() {
                    if let Some(c) = c {
                        let child = &t.nodes()[*c];
                        prop_assert_eq!(child.axis(), node.axis().flip());
                        prop_assert_eq!(*child.cell(), node.child_cell(side));
                    }
                }
            }
        }
    }
}
