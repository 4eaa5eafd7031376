/// Complete binary tree of partial sums over non-negative leaf weights.
///
/// Updates recompute the path to the root from the children, so the total
/// never accumulates drift from repeated increments.
#[derive(Debug, Clone)]
pub(crate) struct SumTree {
    leaves: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    pub(crate) fn new(weights: &[f64]) -> Self {
        let leaves = weights.len().next_power_of_two().max(1);
        let mut nodes = vec![0.0; 2 * leaves];
        nodes[leaves..leaves + weights.len()].copy_from_slice(weights);
        for i in (1..leaves).rev() {
            nodes[i] = nodes[2 * i] + nodes[2 * i + 1];
        }
        Self { leaves, nodes }
    }

    pub(crate) fn total(&self) -> f64 {
        self.nodes[1]
    }

    #[cfg(test)]
    pub(crate) fn get(&self, i: usize) -> f64 {
        self.nodes[self.leaves + i]
    }

    pub(crate) fn set(&mut self, i: usize, w: f64) {
        let mut node = self.leaves + i;
        self.nodes[node] = w;
        while node > 1 {
            node /= 2;
            self.nodes[node] = self.nodes[2 * node] + self.nodes[2 * node + 1];
        }
    }

    /// Leaf whose cumulative interval contains `u ∈ [0, total)`; never
    /// returns a zero-weight leaf while the total is positive.
    pub(crate) fn search(&self, mut u: f64) -> usize {
        let mut node = 1;
        while node < self.leaves {
            let left = self.nodes[2 * node];
            let right = self.nodes[2 * node + 1];
            if left > 0.0 && (u < left || right <= 0.0) {
                node *= 2;
            } else {
                u -= left;
                node = 2 * node + 1;
            }
        }
        node - self.leaves
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_follows_cumulative_weights() {
        let mut t = SumTree::new(&[1.0, 0.0, 2.0, 3.0, 0.0]);
        assert_eq!(t.total(), 6.0);
        assert_eq!(t.search(0.5), 0);
        assert_eq!(t.search(1.0), 2);
        assert_eq!(t.search(2.99), 2);
        assert_eq!(t.search(3.0), 3);
        assert_eq!(t.search(6.5), 3);
        t.set(3, 0.0);
        assert_eq!(t.total(), 3.0);
        assert_eq!(t.search(2.999_999_999), 2);
        assert_eq!(t.search(10.0), 2);
        assert_eq!(t.get(2), 2.0);
    }
}
