use serde::Serialize;

use super::group::UnionFind;
use super::Perm;

/// A partition of `[0, degree)` into cells. Cells are sorted internally
/// and ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    cells: Vec<Vec<u32>>,
    #[serde(skip)]
    cell_of: Vec<usize>,
}

impl Partition {
    /// Cells are the classes of equal labels.
    pub fn from_labels(labels: &[u32]) -> Partition {
        let mut slot: std::collections::HashMap<u32, usize> = Default::default();
        let mut cells: Vec<Vec<u32>> = Vec::new();
        for (p, &l) in labels.iter().enumerate() {
            let idx = *slot.entry(l).or_insert_with(|| {
                cells.push(Vec::new());
                cells.len() - 1
            });
            cells[idx].push(p as u32);
        }
        Partition::from_cells(cells, labels.len())
    }

    fn from_cells(mut cells: Vec<Vec<u32>>, degree: usize) -> Partition {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort_by_key(|c| c[0]);
        let mut cell_of = vec![0; degree];
        for (i, c) in cells.iter().enumerate() {
            for &p in c {
                cell_of[p as usize] = i;
            }
        }
        Partition { cells, cell_of }
    }

    pub fn orbits(degree: usize, gens: &[Perm]) -> Partition {
        let mut uf = UnionFind::new(degree);
        for g in gens {
            for p in 0..degree as u32 {
                uf.union(p, g.apply(p));
            }
        }
        Partition::from_labels(&uf.labels())
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_of(&self, p: u32) -> usize {
        self.cell_of[p as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() <= 1 || self.cells.iter().all(|c| c.len() == 1)
    }

    /// Whether `g` permutes the cells.
    pub fn is_invariant_under(&self, g: &Perm) -> bool {
        self.cells.iter().all(|c| {
            let target = self.cell_of(g.apply(c[0]));
            c.iter().all(|&p| self.cell_of(g.apply(p)) == target)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_of_a_product() {
        let g = Perm::from_images(vec![1, 0, 3, 4, 2, 5]).unwrap();
        let p = Partition::orbits(6, std::slice::from_ref(&g));
        assert_eq!(p.cells(), &[vec![0, 1], vec![2, 3, 4], vec![5]]);
        assert!(p.is_invariant_under(&g));
        assert_eq!(p.cell_of(4), 1);
    }
}
