use crate::map::{Coord, MapLayout, CELL_COUNT};

const UNVISITED: usize = usize::MAX;

/// Articulation points of the 4-connected walkability graph, row-major.
///
/// Single iterative DFS low-link pass per component.
pub fn find_choke_points(layout: &MapLayout) -> Vec<Coord> {
    let mut disc = vec![UNVISITED; CELL_COUNT];
    let mut low = vec![0usize; CELL_COUNT];
    let mut is_cut = vec![false; CELL_COUNT];
    let mut time = 0;

    let walkable_neighbors = |at: Coord| -> Vec<usize> {
        at.neighbors().filter(|&n| layout.is_walkable(n)).map(Coord::index).collect()
    };

    for root in (0..CELL_COUNT).filter(|&i| layout.is_walkable(Coord::from_index(i))) {
        if disc[root] != UNVISITED {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, neighbours, next neighbour position)
        let mut stack = vec![(root, UNVISITED, walkable_neighbors(Coord::from_index(root)), 0usize)];
        while let Some(frame) = stack.last_mut() {
            let (v, parent) = (frame.0, frame.1);
            if frame.3 < frame.2.len() {
                let w = frame.2[frame.3];
                frame.3 += 1;
                if disc[w] == UNVISITED {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, walkable_neighbors(Coord::from_index(w)), 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != UNVISITED {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    (0..CELL_COUNT).filter(|&i| is_cut[i]).map(Coord::from_index).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{Cell, CellKind};

    #[test]
    fn open_grid_has_none() {
        assert!(find_choke_points(&MapLayout::uniform(CellKind::Street)).is_empty());
    }

    #[test]
    fn corridor_between_rooms() {
        let mut layout = MapLayout::uniform(CellKind::Building);
        let mut open = |r, c| layout.set_cell(Coord::new(r, c), Cell::street());
        for r in 2..5 {
            for c in 2..5 {
                open(r, c);
                open(r, c + 6);
            }
        }
        for c in 5..8 {
            open(3, c);
        }
        let cuts = find_choke_points(&layout);
        // corridor plus the two doorway cells it attaches to
        let expected: Vec<Coord> = (4..=8).map(|c| Coord::new(3, c)).collect();
        assert_eq!(cuts, expected);
    }

    #[test]
    fn straight_line_interior_cells() {
        let mut layout = MapLayout::uniform(CellKind::Building);
        for c in 0..5 {
            layout.set_cell(Coord::new(0, c), Cell::street());
        }
        let cuts = find_choke_points(&layout);
        assert_eq!(cuts, (1..4).map(|c| Coord::new(0, c)).collect::<Vec<_>>());
    }

    #[test]
    fn isolated_cell_is_not_a_cut() {
        let mut layout = MapLayout::uniform(CellKind::Building);
        layout.set_cell(Coord::new(7, 7), Cell::street());
        assert!(find_choke_points(&layout).is_empty());
    }
}
