/// Disjoint sets with path compression and union by rank.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.rank.fill(0);
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Each node labeled by the smallest node index in its component.
    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut smallest = vec![usize::MAX; n];
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        for (i, &r) in roots.iter().enumerate() {
            smallest[r] = smallest[r].min(i);
        }
        roots.iter().map(|&r| smallest[r]).collect()
    }
}

/// Union-find that also tracks the unwrapped displacement from every node to
/// its root, so closing a loop that winds around a periodic box is detected.
#[derive(Clone, Debug)]
pub struct DisplacementUnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    /// displacement from node to its parent
    offset: Vec<[i32; 3]>,
    path: Vec<u32>,
}

fn add(a: [i32; 3], b: [i32; 3]) -> [i32; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: [i32; 3], b: [i32; 3]) -> [i32; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl DisplacementUnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            offset: vec![[0; 3]; n],
            path: Vec::new(),
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.rank.fill(0);
        self.offset.fill([0; 3]);
    }

    /// Root of `x` and the displacement from `x` to that root.
    pub fn find(&mut self, x: usize) -> (usize, [i32; 3]) {
        self.path.clear();
        let mut cur = x;
        while self.parent[cur] as usize != cur {
            self.path.push(cur as u32);
            cur = self.parent[cur] as usize;
        }
        let root = cur;
        // walk back from the node nearest the root, accumulating displacements
        let mut acc = [0; 3];
        for &node in self.path.iter().rev() {
            let node = node as usize;
            acc = add(self.offset[node], acc);
            self.offset[node] = acc;
            self.parent[node] = root as u32;
        }
        (root, if x == root { [0; 3] } else { self.offset[x] })
    }

    /// Joins `a` and `b` where `b` sits at `shift` from `a`. Returns the
    /// winding vector if the bond closes a loop around the periodic box.
    pub fn union(&mut self, a: usize, b: usize, shift: [i32; 3]) -> Option<[i32; 3]> {
        let (ra, da) = self.find(a);
        let (rb, db) = self.find(b);
        if ra == rb {
            let winding = sub(add(shift, db), da);
            return (winding != [0; 3]).then_some(winding);
        }
        // displacement from rb to ra
        let rb_to_ra = sub(sub(da, shift), db);
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb as u32;
            self.offset[ra] = [-rb_to_ra[0], -rb_to_ra[1], -rb_to_ra[2]];
        } else {
            self.parent[rb] = ra as u32;
            self.offset[rb] = rb_to_ra;
            if self.rank[ra] == self.rank[rb] {
                self.rank[ra] += 1;
            }
        }
        None
    }
}
