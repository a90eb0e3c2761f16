use std::collections::VecDeque;

use super::{Cell, CellKind, Coord, MapLayout, CELL_COUNT, GRID_SIDE};

/// 4-connected components of street cells, each sorted row-major, ordered
/// by their first cell.
pub fn street_components(layout: &MapLayout) -> Vec<Vec<Coord>> {
    let is_street = |c: Coord| layout.cell(c).content == CellKind::Street;
    let mut seen = vec![false; CELL_COUNT];
    let mut components = Vec::new();
    for start in MapLayout::coords() {
        if seen[start.index()] || !is_street(start) {
            continue;
        }
        seen[start.index()] = true;
        let mut queue = VecDeque::from([start]);
        let mut members = Vec::new();
        while let Some(at) = queue.pop_front() {
            members.push(at);
            for next in at.neighbors() {
                if !seen[next.index()] && is_street(next) {
                    seen[next.index()] = true;
                    queue.push_back(next);
                }
            }
        }
        members.sort();
        components.push(members);
    }
    components
}

fn pave(layout: &mut MapLayout, at: Coord) {
    let cell = layout.cell_mut(at);
    if cell.content != CellKind::Street {
        *cell = Cell { content: CellKind::Street, props: Vec::new(), ..cell.clone() };
        layout.repair_log.push(at);
    }
}

/// Makes the street network a single 4-connected component.
///
/// A map with no streets gets a centre cross (row 10 and column 10). Otherwise
/// the largest component is repeatedly joined to its nearest neighbour
/// component by an L-shaped path that walks along the row first, then the
/// column. Every converted cell is appended to `repair_log`.
pub fn repair(mut layout: MapLayout) -> MapLayout {
    let mid = GRID_SIDE / 2;
    if layout.count(CellKind::Street) == 0 {
        for col in 0..GRID_SIDE {
            pave(&mut layout, Coord::new(mid, col));
        }
        for row in 0..GRID_SIDE {
            pave(&mut layout, Coord::new(row, mid));
        }
    }
    loop {
        let components = street_components(&layout);
        if components.len() <= 1 {
            return layout;
        }
        // Largest first; equal sizes keep the component with the earliest cell.
        let largest = components
            .iter()
            .enumerate()
            .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
            .map(|(i, _)| i)
            .expect("at least two components");
        let (from, to) = components
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != largest)
            .flat_map(|(_, other)| other.iter())
            .flat_map(|&b| components[largest].iter().map(move |&a| (a, b)))
            .min_by_key(|&(a, b)| (a.row.abs_diff(b.row) + a.col.abs_diff(b.col), a, b))
            .expect("non-empty components");
        let step = |from: usize, to: usize| if to > from { from + 1 } else { from - 1 };
        let mut at = from;
        while at.col != to.col {
            at.col = step(at.col, to.col);
            pave(&mut layout, at);
        }
        while at.row != to.row {
            at.row = step(at.row, to.row);
            pave(&mut layout, at);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(streets: &[(usize, usize)]) -> MapLayout {
        let mut layout = MapLayout::uniform(CellKind::Free);
        for &(r, c) in streets {
            layout.set_cell(Coord::new(r, c), Cell::street());
        }
        layout
    }

    #[test]
    fn connected_streets_are_untouched() {
        let before = raw(&[(3, 3), (3, 4), (4, 4)]);
        let after = repair(before.clone());
        assert_eq!(after, before);
        assert!(after.repair_log.is_empty());
    }

    #[test]
    fn row_gap_is_filled() {
        let after = repair(raw(&[(0, 0), (0, 5)]));
        let expected: Vec<Coord> = (1..=4).map(|c| Coord::new(0, c)).collect();
        assert_eq!(after.repair_log, expected);
        assert_eq!(street_components(&after).len(), 1);
    }

    #[test]
    fn l_path_goes_row_first() {
        let after = repair(raw(&[(2, 2), (2, 3), (5, 6)]));
        // Nearest pair is (2,3)-(5,6): along row 2 to column 6, then down.
        assert_eq!(
            after.repair_log,
            vec![Coord::new(2, 4), Coord::new(2, 5), Coord::new(2, 6), Coord::new(3, 6), Coord::new(4, 6)]
        );
    }

    #[test]
    fn empty_map_gets_centre_cross() {
        let after = repair(MapLayout::uniform(CellKind::Free));
        assert_eq!(after.count(CellKind::Street), 39);
        assert_eq!(after.repair_log.len(), 39);
        assert_eq!(after.cell(Coord::new(10, 10)).content, CellKind::Street);
        assert_eq!(street_components(&after).len(), 1);
    }

    #[test]
    fn paving_clears_props() {
        let mut layout = raw(&[(0, 0), (0, 2)]);
        layout.cell_mut(Coord::new(0, 1)).props.push(super::super::PropPlacement {
            kind: super::super::PropKind::Plant,
            u: 0.5,
            v: 0.5,
        });
        let after = repair(layout);
        assert!(after.cell(Coord::new(0, 1)).props.is_empty());
    }
}
