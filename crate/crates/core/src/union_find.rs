/// Union-find over `0..len` with path compression and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
            components: len,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
    }

    pub fn is_connected(&self) -> bool {
        self.components <= 1
    }

    /// Members of the smallest component, ties broken by the smallest
    /// contained index; sorted ascending. Used as the canonical witness
    /// block when the structure is disconnected.
    pub fn smallest_component(&mut self) -> Vec<usize> {
        let len = self.parent.len();
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..len {
            let r = self.find(v);
            groups.entry(r).or_default().push(v);
        }
        groups
            .into_values()
            .min_by_key(|members| (members.len(), members[0]))
            .unwrap_or_default()
    }
}
