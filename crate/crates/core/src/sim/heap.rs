/// Binary min-heap over a fixed set of items `0..n`, keyed by `f64`, with
/// O(log n) key updates. Ties break on the item index.
#[derive(Debug, Clone)]
pub(crate) struct IndexedHeap {
    heap: Vec<usize>,
    pos: Vec<usize>,
    keys: Vec<f64>,
}

impl IndexedHeap {
    pub fn new(keys: Vec<f64>) -> Self {
        let n = keys.len();
        let mut h = Self {
            heap: (0..n).collect(),
            pos: (0..n).collect(),
            keys,
        };
        for i in (0..n / 2).rev() {
            h.sift_down(i);
        }
        h
    }

    #[inline]
    fn less(&self, a: usize, b: usize) -> bool {
        let (ka, kb) = (self.keys[a], self.keys[b]);
        ka < kb || (ka == kb && a < b)
    }

    pub fn peek(&self) -> Option<(usize, f64)> {
        self.heap.first().map(|&i| (i, self.keys[i]))
    }

    #[cfg(test)]
    pub fn key(&self, item: usize) -> f64 {
        self.keys[item]
    }

    pub fn update(&mut self, item: usize, key: f64) {
        let old = self.keys[item];
        self.keys[item] = key;
        let p = self.pos[item];
        if key < old {
            self.sift_up(p);
        } else {
            self.sift_down(p);
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos[self.heap[a]] = a;
        self.pos[self.heap[b]] = b;
    }

    fn sift_up(&mut self, mut p: usize) {
        while p > 0 {
            let parent = (p - 1) / 2;
            if self.less(self.heap[p], self.heap[parent]) {
                self.swap(p, parent);
                p = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut p: usize) {
        let n = self.heap.len();
        loop {
            let (l, r) = (2 * p + 1, 2 * p + 2);
            let mut best = p;
            if l < n && self.less(self.heap[l], self.heap[best]) {
                best = l;
            }
            if r < n && self.less(self.heap[r], self.heap[best]) {
                best = r;
            }
            if best == p {
                break;
            }
            self.swap(p, best);
            p = best;
        }
    }
}
