//! Point quadtrees over a rectangle, partial-match costs and Poissonized
//! samples.
//!
//! Children are numbered bottom-left, top-left, bottom-right, top-right
//! (indices 0..4). A point whose x equals the splitting x goes right, and
//! likewise up for y, so every cell is half-open on its high sides.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::geometry::{check_general_position, Cell, Point2};
use crate::profile::StepProfile;

const NONE: u32 = u32::MAX;

pub const BOTTOM_LEFT: usize = 0;
pub const TOP_LEFT: usize = 1;
pub const BOTTOM_RIGHT: usize = 2;
pub const TOP_RIGHT: usize = 3;

#[derive(Debug, Clone)]
pub struct Node {
    point: Point2,
    cell: Cell,
    children: [u32; 4],
}

impl Node {
    pub fn point(&self) -> &Point2 {
        &self.point
    }

    pub fn cell(&self) -> &Cell {
        &self.cell
    }

    /// Arena indices of the four children.
    pub fn children(&self) -> [Option<usize>; 4] {
        self.children.map(|c| (c != NONE).then_some(c as usize))
    }

    fn child_cell(&self, quadrant: usize) -> Cell {
        let (px, py) = (self.point.x, self.point.y);
        let c = &self.cell;
        match quadrant {
            BOTTOM_LEFT => c.left_of(px).below(py),
            TOP_LEFT => c.left_of(px).above(py),
            BOTTOM_RIGHT => c.right_of(px).below(py),
            _ => c.right_of(px).above(py),
        }
    }
}

#[inline]
fn quadrant(node: &Point2, x: f64, y: f64) -> usize {
    2 * usize::from(x >= node.x) + usize::from(y >= node.y)
}

/// Point quadtree built by insertion in index order. Node 0 is the root.
#[derive(Debug, Clone)]
pub struct QuadTree {
    nodes: Vec<Node>,
    domain: Cell,
}

impl QuadTree {
    pub fn empty() -> Self {
        Self::empty_in(Cell::UNIT)
    }

    pub fn empty_in(domain: Cell) -> Self {
        QuadTree {
            nodes: Vec::new(),
            domain,
        }
    }

    /// Tree on the unit square.
    pub fn build(points: &[Point2]) -> Result<Self> {
        Self::build_in(Cell::UNIT, points)
    }

    /// Tree whose root cell is `domain`.
    pub fn build_in(domain: Cell, points: &[Point2]) -> Result<Self> {
        check_general_position(points, &domain)?;
        Ok(Self::build_unchecked(domain, points))
    }

    /// Skips the general-position check; ties follow the right/up convention.
    pub(crate) fn build_unchecked(domain: Cell, points: &[Point2]) -> Self {
        let mut tree = QuadTree {
            nodes: Vec::with_capacity(points.len()),
            domain,
        };
        for p in points {
            tree.insert_unchecked(*p);
        }
        tree
    }

    /// Inserts one point. Ties with a coordinate on the search path are
    /// rejected.
    pub fn insert(&mut self, p: Point2) -> Result<()> {
        if !self.domain.contains_closed(p.x, p.y) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let mut at = 0usize;
        while at < self.nodes.len() {
            let q = &self.nodes[at].point;
            if q.x == p.x {
                return Err(Error::DuplicateCoordinate { axis: 'x', value: p.x });
            }
            if q.y == p.y {
                return Err(Error::DuplicateCoordinate { axis: 'y', value: p.y });
            }
            let next = self.nodes[at].children[quadrant(q, p.x, p.y)];
            if next == NONE {
                break;
            }
            at = next as usize;
        }
        self.insert_unchecked(p);
        Ok(())
    }

    fn insert_unchecked(&mut self, p: Point2) {
        let new = self.nodes.len() as u32;
        if self.nodes.is_empty() {
            self.nodes.push(Node {
                point: p,
                cell: self.domain,
                children: [NONE; 4],
            });
            return;
        }
        let mut at = 0usize;
        loop {
            let q = quadrant(&self.nodes[at].point, p.x, p.y);
            match self.nodes[at].children[q] {
                NONE => {
                    let cell = self.nodes[at].child_cell(q);
                    self.nodes[at].children[q] = new;
                    self.nodes.push(Node {
                        point: p,
                        cell,
                        children: [NONE; 4],
                    });
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

    pub fn domain(&self) -> &Cell {
        &self.domain
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    fn check_query(&self, s: f64) -> Result<()> {
        if self.domain.x0 <= s && s <= self.domain.x1 {
            Ok(())
        } else {
            Err(Error::Domain {
                name: "s",
                value: s,
                domain: "the tree's x-range",
            })
        }
    }

    /// Partial-match cost: nodes visited by the search for the line `x = s`.
    pub fn cost(&self, s: f64) -> Result<u64> {
        self.prefix_cost(self.nodes.len(), s)
    }

    /// Cost at `s` in the tree built from the first `len` inserted points.
    /// Nodes are stored in insertion order, so that tree is the set of nodes
    /// with index below `len`.
    pub fn prefix_cost(&self, len: usize, s: f64) -> Result<u64> {
        self.check_query(s)?;
        let len = len.min(self.nodes.len()) as u32;
        if len == 0 {
            return Ok(0);
        }
        let mut visited = 0u64;
        let mut stack = vec![0u32];
        while let Some(i) = stack.pop() {
            visited += 1;
            let node = &self.nodes[i as usize];
            let pair = if s < node.point.x {
                [BOTTOM_LEFT, TOP_LEFT]
            } else {
                [BOTTOM_RIGHT, TOP_RIGHT]
            };
            for q in pair {
                // NONE is u32::MAX, so it also fails this test
                if node.children[q] < len {
                    stack.push(node.children[q]);
                }
            }
        }
        Ok(visited)
    }

    /// Number of stored horizontal split segments crossing `x = s`, found by
    /// scanning every node's cell.
    pub fn horizontal_crossings(&self, s: f64) -> Result<u64> {
        self.check_query(s)?;
        let x1 = self.domain.x1;
        Ok(self.nodes.iter().filter(|n| n.cell.meets_vertical(s, x1)).count() as u64)
    }

    /// The whole map `s ↦ cost(s)` as a step function.
    pub fn profile(&self) -> StepProfile {
        self.prefix_profile(self.nodes.len())
    }

    /// Profile of the tree on the first `len` inserted points.
    pub fn prefix_profile(&self, len: usize) -> StepProfile {
        StepProfile::from_intervals(
            self.domain.x0,
            self.domain.x1,
            self.nodes[..len.min(self.nodes.len())].iter().map(|n| (n.cell.x0, n.cell.x1)),
        )
    }

    /// `sup_s cost(s)` and the first segment where it is attained.
    pub fn supremum(&self) -> (u64, (f64, f64)) {
        self.profile().supremum()
    }

    /// Sizes of the four root subtrees in child order.
    pub fn subtree_sizes(&self) -> Result<[usize; 4]> {
        let root = self.nodes.first().ok_or(Error::EmptyTree)?;
        Ok(root.children.map(|c| if c == NONE { 0 } else { self.subtree_len(c) }))
    }

    fn subtree_len(&self, root: u32) -> usize {
        let mut count = 0;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            count += 1;
            stack.extend(self.nodes[i as usize].children.iter().filter(|&&c| c != NONE));
        }
        count
    }

    /// Largest `k` such that all `4^j` potential nodes at every depth `j < k`
    /// are present.
    pub fn fill_up_level(&self) -> usize {
        if self.nodes.is_empty() {
            return 0;
        }
        // fill(v) = 1 + min over children, with a missing child counting 0
        let mut fill = vec![0usize; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            // children are always pushed after their parent
            let m = self.nodes[i]
                .children
                .iter()
                .map(|&c| if c == NONE { 0 } else { fill[c as usize] })
                .min()
                .unwrap_or(0);
            fill[i] = 1 + m;
        }
        fill[0]
    }
}

/// `n` independent uniform points in the unit square.
pub fn sample_uniform_points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Point2> {
    sample_points_in(n, &Cell::UNIT, rng)
}

fn sample_points_in<R: Rng + ?Sized>(n: usize, cell: &Cell, rng: &mut R) -> Vec<Point2> {
    (0..n)
        .map(|i| {
            let x = cell.x0 + cell.width() * rng.random::<f64>();
            let y = cell.y0 + cell.height() * rng.random::<f64>();
            Point2::new(x, y, i)
        })
        .collect()
}

/// A Poisson(`mean`) count.
pub fn sample_poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<usize> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(Error::Domain {
            name: "t",
            value: mean,
            domain: "[0, inf)",
        });
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|_| Error::Domain {
        name: "t",
        value: mean,
        domain: "[0, 1.8e19)",
    })?;
    Ok(dist.sample(rng) as usize)
}

/// Quadtree on a Poisson(`t`) number of uniform points in the unit square.
pub fn sample_poisson_tree<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<QuadTree> {
    let n = sample_poisson_count(t, rng)?;
    Ok(QuadTree::build_unchecked(Cell::UNIT, &sample_uniform_points(n, rng)))
}

/// The box `[−ε, 1] × [0, 1]` shared by the coupled trees.
pub fn extended_box(eps: f64) -> Result<Cell> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::Domain {
            name: "epsilon",
            value: eps,
            domain: "[0, inf)",
        });
    }
    Ok(Cell {
        x0: -eps,
        x1: 1.0,
        y0: 0.0,
        y1: 1.0,
    })
}

/// Unit-intensity-per-`t` Poisson sample on `[−ε, 1] × [0, 1]`.
pub fn sample_extended_poisson<R: Rng + ?Sized>(t: f64, eps: f64, rng: &mut R) -> Result<Vec<Point2>> {
    let domain = extended_box(eps)?;
    let n = sample_poisson_count(t * domain.area(), rng)?;
    Ok(sample_points_in(n, &domain, rng))
}

/// Costs at `s` of the tree on the points inside the unit square and of the
/// tree on all points of the extended box, both counted as horizontal
/// crossings.
pub fn coupled_extension_cost(points: &[Point2], eps: f64, s: f64) -> Result<(u64, u64)> {
    crate::error::check_unit("s", s)?;
    let domain = extended_box(eps)?;
    let inside: Vec<Point2> = points.iter().filter(|p| p.x >= 0.0).copied().collect();
    let base = QuadTree::build_unchecked(Cell::UNIT, &inside);
    let extended = QuadTree::build_unchecked(domain, points);
    Ok((base.horizontal_crossings(s)?, extended.horizontal_crossings(s)?))
}
