use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CELL_COUNT, GRID_SIDE, MAX_PROPS, MAX_STORIES, PREFAB_COUNT};
use crate::error::{Error, Result};

/// Grid position, serialized as `[row, col]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn from_index(index: usize) -> Self {
        Self::new(index / GRID_SIDE, index % GRID_SIDE)
    }

    pub fn index(self) -> usize {
        self.row * GRID_SIDE + self.col
    }

    pub fn in_bounds(row: isize, col: isize) -> bool {
        (0..GRID_SIDE as isize).contains(&row) && (0..GRID_SIDE as isize).contains(&col)
    }

    /// 4-connected neighbours inside the grid.
    pub fn neighbors(self) -> impl Iterator<Item = Coord> {
        let (r, c) = (self.row as isize, self.col as isize);
        [(r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)]
            .into_iter()
            .filter(|&(r, c)| Self::in_bounds(r, c))
            .map(|(r, c)| Coord::new(r as usize, c as usize))
    }
}

impl From<[usize; 2]> for Coord {
    fn from([row, col]: [usize; 2]) -> Self {
        Self { row, col }
    }
}

impl From<Coord> for [usize; 2] {
    fn from(c: Coord) -> Self {
        [c.row, c.col]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    #[serde(rename = "S")]
    Street,
    #[serde(rename = "B")]
    Building,
    #[serde(rename = "F")]
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropKind {
    Container,
    Plant,
    Furniture,
    Debris,
}

impl PropKind {
    pub const ALL: [PropKind; 4] = [Self::Container, Self::Plant, Self::Furniture, Self::Debris];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropPlacement {
    #[serde(rename = "k")]
    pub kind: PropKind,
    /// Local cell coordinates in `[0, 1)`.
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    #[serde(rename = "t")]
    pub content: CellKind,
    /// Stories, 1..=6. Only meaningful for buildings.
    #[serde(rename = "h")]
    pub height_stories: u8,
    /// Building prefab style, 0..=11.
    #[serde(rename = "p")]
    pub prefab_index: u8,
    pub props: Vec<PropPlacement>,
}

impl Cell {
    pub fn street() -> Self {
        Self { content: CellKind::Street, height_stories: 1, prefab_index: 0, props: Vec::new() }
    }

    pub fn free() -> Self {
        Self { content: CellKind::Free, height_stories: 1, prefab_index: 0, props: Vec::new() }
    }

    pub fn building(height_stories: u8) -> Self {
        Self { content: CellKind::Building, height_stories, prefab_index: 0, props: Vec::new() }
    }

    /// Props never block movement, so free cells are walkable whatever they carry.
    pub fn is_walkable(&self) -> bool {
        matches!(self.content, CellKind::Street | CellKind::Free)
    }

    /// Whether the cell stops a sight ray: buildings, and free cells with 2+ props.
    pub fn blocks_rays(&self) -> bool {
        match self.content {
            CellKind::Building => true,
            CellKind::Free => self.props.len() >= 2,
            CellKind::Street => false,
        }
    }
}

/// A decoded 20×20 level: 25-unit cells centred in the 512-unit canvas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapLayout {
    cells: Vec<Cell>,
    pub spawns: [Coord; 2],
    pub repair_log: Vec<Coord>,
}

impl MapLayout {
    /// Builds a layout from 400 row-major cells. Spawns start at the origin
    /// and are normally assigned by [`MapLayout::place_spawns`].
    pub fn from_cells(cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != CELL_COUNT {
            return Err(Error::InvalidLevel(format!("{} cells, expected {CELL_COUNT}", cells.len())));
        }
        Ok(Self { cells, spawns: [Coord::new(0, 0); 2], repair_log: Vec::new() })
    }

    /// Layout where every cell has the given content and no props.
    pub fn uniform(content: CellKind) -> Self {
        let cell = Cell { content, height_stories: 1, prefab_index: 0, props: Vec::new() };
        let mut layout = Self::from_cells(vec![cell; CELL_COUNT]).expect("fixed size");
        layout.place_spawns();
        layout
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, at: Coord) -> &Cell {
        &self.cells[at.index()]
    }

    pub fn cell_mut(&mut self, at: Coord) -> &mut Cell {
        &mut self.cells[at.index()]
    }

    pub fn set_cell(&mut self, at: Coord, cell: Cell) {
        self.cells[at.index()] = cell;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cell]> {
        self.cells.chunks(GRID_SIDE)
    }

    pub fn coords() -> impl Iterator<Item = Coord> {
        (0..CELL_COUNT).map(Coord::from_index)
    }

    pub fn is_walkable(&self, at: Coord) -> bool {
        self.cell(at).is_walkable()
    }

    pub fn count(&self, content: CellKind) -> usize {
        self.cells.iter().filter(|c| c.content == content).count()
    }

    pub fn walkable_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_walkable()).count()
    }

    /// Walkable cells reachable from `start` (empty if `start` is blocked).
    pub fn walkable_reach(&self, start: Coord) -> Vec<bool> {
        let mut seen = vec![false; CELL_COUNT];
        if !self.is_walkable(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen[start.index()] = true;
        while let Some(at) = queue.pop_front() {
            for next in at.neighbors() {
                if !seen[next.index()] && self.is_walkable(next) {
                    seen[next.index()] = true;
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    pub fn spawns_connected(&self) -> bool {
        let [a, b] = self.spawns;
        self.walkable_reach(a)[b.index()]
    }

    /// Places team spawns on the walkable cells, reachable from the street
    /// network, nearest the west-edge and east-edge midpoints `(10, 0)` and
    /// `(10, 19)`; ties go to the lowest row, then the lowest column.
    pub fn place_spawns(&mut self) {
        let seed = Self::coords()
            .find(|&c| self.cell(c).content == CellKind::Street)
            .or_else(|| Self::coords().find(|&c| self.is_walkable(c)));
        let Some(seed) = seed else {
            return;
        };
        let reach = self.walkable_reach(seed);
        let mid = GRID_SIDE / 2;
        let nearest = |target: Coord| {
            Self::coords()
                .filter(|c| reach[c.index()])
                .min_by_key(|c| {
                    let dr = c.row.abs_diff(target.row);
                    let dc = c.col.abs_diff(target.col);
                    (dr * dr + dc * dc, c.row, c.col)
                })
                .expect("reach contains the seed")
        };
        self.spawns = [nearest(Coord::new(mid, 0)), nearest(Coord::new(mid, GRID_SIDE - 1))];
    }

    /// Checks every structural invariant of a finished layout.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLevel(msg));
        if self.cells.len() != CELL_COUNT {
            return bad(format!("{} cells, expected {CELL_COUNT}", self.cells.len()));
        }
        for (i, cell) in self.cells.iter().enumerate() {
            let at = Coord::from_index(i);
            if cell.prefab_index >= PREFAB_COUNT {
                return bad(format!("prefab {} at {at}", cell.prefab_index));
            }
            if !(1..=MAX_STORIES).contains(&cell.height_stories) {
                return bad(format!("height {} at {at}", cell.height_stories));
            }
            if cell.props.len() > MAX_PROPS {
                return bad(format!("{} props at {at}", cell.props.len()));
            }
            if cell.content != CellKind::Free && !cell.props.is_empty() {
                return bad(format!("non-free cell {at} carries props"));
            }
            if cell.props.iter().any(|p| !(0.0..1.0).contains(&p.u) || !(0.0..1.0).contains(&p.v)) {
                return bad(format!("prop sub-position outside [0, 1) at {at}"));
            }
        }
        let components = super::street_components(self).len();
        if components != 1 {
            return bad(format!("{components} street components, expected 1"));
        }
        for s in self.spawns {
            if s.row >= GRID_SIDE || s.col >= GRID_SIDE || !self.is_walkable(s) {
                return bad(format!("spawn {s} is not walkable"));
            }
        }
        if !self.spawns_connected() {
            return bad("spawns are not mutually reachable".into());
        }
        Ok(())
    }

    /// One character per cell: `#` building, `=` street, `.` free, `*` free
    /// with props, `A`/`B` spawns. Rows end with a newline.
    pub fn ascii(&self) -> String {
        let mut out = String::with_capacity(CELL_COUNT + GRID_SIDE);
        for (i, cell) in self.cells.iter().enumerate() {
            let at = Coord::from_index(i);
            let ch = if at == self.spawns[0] {
                'A'
            } else if at == self.spawns[1] {
                'B'
            } else {
                match cell.content {
                    CellKind::Building => '#',
                    CellKind::Street => '=',
                    CellKind::Free if cell.props.is_empty() => '.',
                    CellKind::Free => '*',
                }
            };
            out.push(ch);
            if at.col == GRID_SIDE - 1 {
                out.push('\n');
            }
        }
        out
    }

    /// The same level turned 90° clockwise: cell `(r, c)` moves to `(c, 19 - r)`.
    pub fn rotated_clockwise(&self) -> Self {
        let rot = |c: Coord| Coord::new(c.col, GRID_SIDE - 1 - c.row);
        let mut cells = self.cells.clone();
        for (i, cell) in self.cells.iter().enumerate() {
            cells[rot(Coord::from_index(i)).index()] = cell.clone();
        }
        Self {
            cells,
            spawns: self.spawns.map(rot),
            repair_log: self.repair_log.iter().copied().map(rot).collect(),
        }
    }
}
