/// Flat structuring element given by its pixel offsets.
///
/// Offsets are stored per row as horizontal runs, which is what the
/// dilation/erosion kernels iterate over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    radius: usize,
    /// `(dy, dx_min, dx_max)`, one entry per non-empty row, dy ascending.
    spans: Vec<(isize, isize, isize)>,
}

/// Disk of lattice points with `dx² + dy² <= radius²`.
pub fn make_disk(radius: usize) -> StructuringElement {
    let r = radius as isize;
    let spans = (-r..=r)
        .map(|dy| {
            // widest dx with dx² <= r² - dy²
            let rem = r * r - dy * dy;
            let mut a = (rem as f64).sqrt() as isize;
            while a * a > rem {
                a -= 1;
            }
            while (a + 1) * (a + 1) <= rem {
                a += 1;
            }
            (dy, -a, a)
        })
        .collect();
    StructuringElement { radius, spans }
}

impl StructuringElement {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub(crate) fn spans(&self) -> &[(isize, isize, isize)] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.spans.iter().map(|&(_, lo, hi)| (hi - lo + 1) as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Every `(dx, dy)` in the element, row-major.
    pub fn offsets(&self) -> impl Iterator<Item = (isize, isize)> + '_ {
        self.spans
            .iter()
            .flat_map(|&(dy, lo, hi)| (lo..=hi).map(move |dx| (dx, dy)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_disks() {
        assert_eq!(make_disk(0).offsets().collect::<Vec<_>>(), vec![(0, 0)]);
        let mut r1: Vec<_> = make_disk(1).offsets().collect();
        r1.sort();
        assert_eq!(r1, vec![(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn disk_matches_lattice_count() {
        for r in 0..=12usize {
            let ri = r as isize;
            let brute = (-ri..=ri)
                .flat_map(|dy| (-ri..=ri).map(move |dx| (dx, dy)))
                .filter(|(dx, dy)| dx * dx + dy * dy <= ri * ri)
                .count();
            assert_eq!(make_disk(r).len(), brute, "radius {r}");
        }
        assert_eq!(make_disk(8).len(), 197);
    }

    #[test]
    fn disk_is_symmetric_and_centred() {
        let se = make_disk(5);
        let set: std::collections::HashSet<_> = se.offsets().collect();
        assert!(set.contains(&(0, 0)));
        for &(dx, dy) in &set {
            assert!(set.contains(&(-dx, -dy)));
        }
    }
}
