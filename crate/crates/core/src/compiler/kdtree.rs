//! Static k-d tree for nearest-neighbour queries in `R^D`.

/// Points are stored in tree order; the median of each range is the node.
#[derive(Debug, Clone)]
pub struct KdTree<const D: usize> {
    pts: Vec<[f64; D]>,
    ids: Vec<usize>,
}

impl<const D: usize> KdTree<D> {
    pub fn build(points: Vec<([f64; D], usize)>) -> Self {
        let mut items = points;
        let n = items.len();
        Self::arrange(&mut items, 0, n, 0);
        let (pts, ids) = items.into_iter().unzip();
        KdTree { pts, ids }
    }

    fn arrange(items: &mut [([f64; D], usize)], lo: usize, hi: usize, depth: usize) {
        if hi - lo <= 1 {
            return;
        }
        let axis = depth % D;
        let mid = (lo + hi) / 2;
        items[lo..hi].select_nth_unstable_by(mid - lo, |x, y| x.0[axis].total_cmp(&y.0[axis]).then(x.1.cmp(&y.1)));
        Self::arrange(items, lo, mid, depth + 1);
        Self::arrange(items, mid + 1, hi, depth + 1);
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Nearest point as `(distance, id)`; ties go to the smaller id.
    pub fn nearest(&self, q: &[f64; D]) -> Option<(f64, usize)> {
        if self.pts.is_empty() {
            return None;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(q, 0, self.pts.len(), 0, &mut best);
        Some((best.0.sqrt(), best.1))
    }

    fn search(&self, q: &[f64; D], lo: usize, hi: usize, depth: usize, best: &mut (f64, usize)) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let p = &self.pts[mid];
        let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
        let id = self.ids[mid];
        if d2 < best.0 || (d2 == best.0 && id < best.1) {
            *best = (d2, id);
        }
        let axis = depth % D;
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, near.0, near.1, depth + 1, best);
        if diff * diff <= best.0 {
            self.search(q, far.0, far.1, depth + 1, best);
        }
    }
}
