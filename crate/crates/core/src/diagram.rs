//! Finite diagrams of matrices and commutativity checking.
//!
//! A diagram is a small directed multigraph whose nodes are named finite
//! objects (with sizes) and whose edges carry matrices from source to
//! target. The diagram **commutes** when every two directed paths sharing
//! both endpoints compose to the same matrix.
//!
//! Checking enumerates all paths up to a fixed length bound (default 4,
//! enough for the squares built here) and compares parallel ones entry by
//! entry, reporting the first differing entry per mismatching pair. A
//! diagram may instead declare distinguished parallel path pairs; when any
//! are declared, exactly those pairs are checked.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::matrix::{Matrix, MatrixError};
use crate::semiring::Semiring;

/// Index of an object within its diagram.
pub type ObjId = usize;
/// Index of an edge within its diagram.
pub type EdgeId = usize;

/// All paths sharing one (source, target) pair, each a chain of edges.
type PathGroup = ((ObjId, ObjId), Vec<Vec<EdgeId>>);

/// Paths longer than this are not considered by the default check.
pub const PATH_BOUND: usize = 4;

/// Errors from diagram construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("duplicate object name {0:?}")]
    DuplicateObject(String),
    #[error("duplicate edge name {0:?}")]
    DuplicateEdge(String),
    #[error("object id {0} out of range")]
    UnknownObject(ObjId),
    #[error("edge id {0} out of range")]
    UnknownEdge(EdgeId),
    #[error("edge {name:?}: matrix is {mrows}x{mcols} but {src:?} -> {tgt:?} needs {srows}x{scols}")]
    EdgeShape {
        name: String,
        mrows: usize,
        mcols: usize,
        src: String,
        tgt: String,
        srows: usize,
        scols: usize,
    },
    #[error("a declared path must have at least one edge")]
    EmptyPath,
    #[error("path edges do not chain: edge {0:?} does not start where {1:?} ends")]
    BrokenPath(String, String),
    #[error("declared paths are not parallel: {0:?} -> {1:?} vs {2:?} -> {3:?}")]
    NotParallel(String, String, String, String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

struct Object {
    name: String,
    size: usize,
}

struct Edge<S> {
    name: String,
    src: ObjId,
    tgt: ObjId,
    matrix: Matrix<S>,
}

/// One failed comparison between two parallel paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch<S> {
    pub source: String,
    pub target: String,
    /// Edge names along the two paths.
    pub left: Vec<String>,
    pub right: Vec<String>,
    /// First differing entry (row-major scan) and the two values there.
    pub row: usize,
    pub col: usize,
    pub left_value: S,
    pub right_value: S,
}

/// Outcome of a commutativity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutesReport<S> {
    pub pairs_checked: usize,
    pub mismatches: Vec<Mismatch<S>>,
}

impl<S> CommutesReport<S> {
    pub fn commutes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// A named diagram of matrices over the semiring `S`.
pub struct Diagram<S> {
    objects: Vec<Object>,
    edges: Vec<Edge<S>>,
    declared_pairs: Vec<(Vec<EdgeId>, Vec<EdgeId>)>,
}

impl<S: Semiring> Diagram<S> {
    pub fn new() -> Self {
        Diagram {
            objects: Vec::new(),
            edges: Vec::new(),
            declared_pairs: Vec::new(),
        }
    }

    /// Adds a named object of the given size and returns its id.
    pub fn add_object(&mut self, name: impl Into<String>, size: usize) -> Result<ObjId, DiagramError> {
        let name = name.into();
        if self.objects.iter().any(|o| o.name == name) {
            return Err(DiagramError::DuplicateObject(name));
        }
        self.objects.push(Object { name, size });
        Ok(self.objects.len() - 1)
    }

    /// Adds a named edge; the matrix shape must be `|src| x |tgt|`.
    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        src: ObjId,
        tgt: ObjId,
        matrix: Matrix<S>,
    ) -> Result<EdgeId, DiagramError> {
        let name = name.into();
        if self.edges.iter().any(|e| e.name == name) {
            return Err(DiagramError::DuplicateEdge(name));
        }
        let (s, t) = (
            self.objects.get(src).ok_or(DiagramError::UnknownObject(src))?,
            self.objects.get(tgt).ok_or(DiagramError::UnknownObject(tgt))?,
        );
        if matrix.rows() != s.size || matrix.cols() != t.size {
            return Err(DiagramError::EdgeShape {
                name,
                mrows: matrix.rows(),
                mcols: matrix.cols(),
                src: s.name.clone(),
                tgt: t.name.clone(),
                srows: s.size,
                scols: t.size,
            });
        }
        self.edges.push(Edge {
            name,
            src,
            tgt,
            matrix,
        });
        Ok(self.edges.len() - 1)
    }

    /// Declares one parallel path pair to check instead of enumerating.
    pub fn declare_parallel_pair(
        &mut self,
        left: &[EdgeId],
        right: &[EdgeId],
    ) -> Result<(), DiagramError> {
        let (ls, lt) = self.path_endpoints(left)?;
        let (rs, rt) = self.path_endpoints(right)?;
        if (ls, lt) != (rs, rt) {
            return Err(DiagramError::NotParallel(
                self.objects[ls].name.clone(),
                self.objects[lt].name.clone(),
                self.objects[rs].name.clone(),
                self.objects[rt].name.clone(),
            ));
        }
        self.declared_pairs.push((left.to_vec(), right.to_vec()));
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn object_name(&self, id: ObjId) -> &str {
        &self.objects[id].name
    }

    pub fn edge_name(&self, id: EdgeId) -> &str {
        &self.edges[id].name
    }

    pub fn edge_matrix(&self, id: EdgeId) -> &Matrix<S> {
        &self.edges[id].matrix
    }

    fn path_endpoints(&self, path: &[EdgeId]) -> Result<(ObjId, ObjId), DiagramError> {
        let first = *path.first().ok_or(DiagramError::EmptyPath)?;
        let mut cur = self
            .edges
            .get(first)
            .ok_or(DiagramError::UnknownEdge(first))?;
        let src = cur.src;
        for &next in &path[1..] {
            let e = self.edges.get(next).ok_or(DiagramError::UnknownEdge(next))?;
            if e.src != cur.tgt {
                return Err(DiagramError::BrokenPath(
                    e.name.clone(),
                    cur.name.clone(),
                ));
            }
            cur = e;
        }
        Ok((src, cur.tgt))
    }

    /// Composes the matrices along a path, left to right.
    pub fn path_matrix(&self, path: &[EdgeId]) -> Result<Matrix<S>, DiagramError> {
        self.path_endpoints(path)?;
        let mut acc = self.edges[path[0]].matrix.clone();
        for &e in &path[1..] {
            acc = acc.compose(&self.edges[e].matrix)?;
        }
        Ok(acc)
    }

    /// All nonempty paths of length at most `bound`, grouped by endpoints,
    /// in (length, edge-id) lexicographic order.
    fn paths_by_endpoints(&self, bound: usize) -> Vec<PathGroup> {
        let mut groups: Vec<PathGroup> = Vec::new();
        let mut frontier: Vec<Vec<EdgeId>> = (0..self.edges.len()).map(|e| alloc::vec![e]).collect();
        for _ in 0..bound {
            for path in &frontier {
                let src = self.edges[path[0]].src;
                let tgt = self.edges[*path.last().expect("nonempty")].tgt;
                match groups.iter_mut().find(|(k, _)| *k == (src, tgt)) {
                    Some((_, v)) => v.push(path.clone()),
                    None => groups.push(((src, tgt), alloc::vec![path.clone()])),
                }
            }
            let mut next = Vec::new();
            for path in &frontier {
                let tgt = self.edges[*path.last().expect("nonempty")].tgt;
                for (e, edge) in self.edges.iter().enumerate() {
                    if edge.src == tgt {
                        let mut p = path.clone();
                        p.push(e);
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        groups
    }

    fn names(&self, path: &[EdgeId]) -> Vec<String> {
        path.iter().map(|&e| self.edges[e].name.clone()).collect()
    }

    fn compare_pair(
        &self,
        left: &[EdgeId],
        right: &[EdgeId],
        eq: &dyn Fn(&S, &S) -> bool,
    ) -> Result<Option<Mismatch<S>>, DiagramError> {
        let (src, tgt) = self.path_endpoints(left)?;
        let lm = self.path_matrix(left)?;
        let rm = self.path_matrix(right)?;
        for r in 0..lm.rows() {
            for c in 0..lm.cols() {
                if !eq(lm.entry(r, c), rm.entry(r, c)) {
                    return Ok(Some(Mismatch {
                        source: self.objects[src].name.clone(),
                        target: self.objects[tgt].name.clone(),
                        left: self.names(left),
                        right: self.names(right),
                        row: r,
                        col: c,
                        left_value: lm.entry(r, c).clone(),
                        right_value: rm.entry(r, c).clone(),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Checks commutativity under an entrywise equivalence predicate, with
    /// the given path-length bound.
    ///
    /// Two composites count as equal when `eq` holds at every entry; the
    /// mismatch witness is the first entry where it fails. Exact settings
    /// pass `==`; quotiented settings pass a threshold predicate.
    ///
    /// With declared pairs, exactly those are compared; otherwise every
    /// parallel pair of enumerated paths is compared against the first path
    /// found between the same endpoints.
    pub fn check_commutes_with(
        &self,
        bound: usize,
        eq: impl Fn(&S, &S) -> bool,
    ) -> Result<CommutesReport<S>, DiagramError> {
        let mut report = CommutesReport {
            pairs_checked: 0,
            mismatches: Vec::new(),
        };
        if !self.declared_pairs.is_empty() {
            for (l, r) in &self.declared_pairs {
                report.pairs_checked += 1;
                if let Some(m) = self.compare_pair(l, r, &eq)? {
                    report.mismatches.push(m);
                }
            }
            return Ok(report);
        }
        for (_, paths) in self.paths_by_endpoints(bound) {
            for other in &paths[1..] {
                report.pairs_checked += 1;
                if let Some(m) = self.compare_pair(&paths[0], other, &eq)? {
                    report.mismatches.push(m);
                }
            }
        }
        Ok(report)
    }

    /// Exact-equality commutativity with the given path-length bound.
    pub fn check_commutes_bounded(&self, bound: usize) -> Result<CommutesReport<S>, DiagramError> {
        self.check_commutes_with(bound, |a, b| a == b)
    }

    /// Exact-equality commutativity with the default [`PATH_BOUND`].
    pub fn check_commutes(&self) -> Result<CommutesReport<S>, DiagramError> {
        self.check_commutes_bounded(PATH_BOUND)
    }
}

impl<S: Semiring> Default for Diagram<S> {
    fn default() -> Self {
        Diagram::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{rat, Rat};

    /// A square with two routes `a -> d`: via `b` and via `c`.
    fn square(tweak: bool) -> Diagram<Rat> {
        let mut d = Diagram::new();
        let a = d.add_object("a", 2).unwrap();
        let b = d.add_object("b", 2).unwrap();
        let c = d.add_object("c", 2).unwrap();
        let t = d.add_object("d", 2).unwrap();
        let swap: Matrix<Rat> = Matrix::from_function(2, 2, |i| 1 - i);
        let idm: Matrix<Rat> = Matrix::identity(2);
        d.add_edge("top", a, b, swap.clone()).unwrap();
        d.add_edge("right", b, t, idm.clone()).unwrap();
        d.add_edge("left", a, c, if tweak { idm.clone() } else { swap.clone() })
            .unwrap();
        d.add_edge("bottom", c, t, idm).unwrap();
        d
    }

    #[test]
    fn commuting_square_passes() {
        let report = square(false).check_commutes().unwrap();
        assert!(report.commutes());
        assert_eq!(report.pairs_checked, 1);
    }

    #[test]
    fn broken_square_reports_the_entry() {
        let report = square(true).check_commutes().unwrap();
        assert!(!report.commutes());
        let m = &report.mismatches[0];
        assert_eq!((m.source.as_str(), m.target.as_str()), ("a", "d"));
        assert_eq!((m.row, m.col), (0, 0));
        assert_eq!(m.left_value, rat(0, 1));
        assert_eq!(m.right_value, rat(1, 1));
    }

    #[test]
    fn declared_pairs_override_enumeration() {
        let mut d = square(true);
        // Compare the top-right route against itself only: passes trivially.
        d.declare_parallel_pair(&[0, 1], &[0, 1]).unwrap();
        let report = d.check_commutes().unwrap();
        assert!(report.commutes());
        assert_eq!(report.pairs_checked, 1);
    }

    #[test]
    fn shape_mismatch_is_rejected_at_add_time() {
        let mut d: Diagram<Rat> = Diagram::new();
        let a = d.add_object("a", 2).unwrap();
        let b = d.add_object("b", 3).unwrap();
        let err = d.add_edge("e", a, b, Matrix::identity(2)).unwrap_err();
        assert!(matches!(err, DiagramError::EdgeShape { .. }));
    }

    #[test]
    fn empty_and_edgeless_diagrams_pass_vacuously() {
        let empty: Diagram<Rat> = Diagram::new();
        assert!(empty.check_commutes().unwrap().commutes());
        let mut one_object: Diagram<Rat> = Diagram::new();
        one_object.add_object("a", 3).unwrap();
        let report = one_object.check_commutes().unwrap();
        assert!(report.commutes());
        assert_eq!(report.pairs_checked, 0);
    }

    #[test]
    fn threshold_predicate_tolerates_small_gaps() {
        let d = square(true);
        let loose = d
            .check_commutes_with(4, |a: &Rat, b: &Rat| {
                crate::semiring::abs_diff(a, b) <= rat(1, 1)
            })
            .unwrap();
        assert!(loose.commutes());
        let tight = d
            .check_commutes_with(4, |a: &Rat, b: &Rat| {
                crate::semiring::abs_diff(a, b) <= rat(1, 2)
            })
            .unwrap();
        assert!(!tight.commutes());
    }

    #[test]
    fn adding_a_redundant_edge_keeps_a_passing_square_passing() {
        let mut d = square(false);
        let composite = d.path_matrix(&[0, 1]).unwrap();
        let a = 0;
        let t = 3;
        d.add_edge("diagonal", a, t, composite).unwrap();
        assert!(d.check_commutes().unwrap().commutes());
    }

    #[test]
    fn longer_parallel_routes_are_found() {
        // a -> b -> d vs a -> d direct.
        let mut d: Diagram<Rat> = Diagram::new();
        let a = d.add_object("a", 1).unwrap();
        let b = d.add_object("b", 1).unwrap();
        let t = d.add_object("d", 1).unwrap();
        let one = Matrix::identity(1);
        d.add_edge("ab", a, b, one.clone()).unwrap();
        d.add_edge("bd", b, t, one.clone()).unwrap();
        d.add_edge("ad", a, t, one.scale(&rat(1, 2))).unwrap();
        let report = d.check_commutes().unwrap();
        assert!(!report.commutes());
    }
}
