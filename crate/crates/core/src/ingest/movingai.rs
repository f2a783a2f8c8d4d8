use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Geometry, GridGeometry, Topology, VertexId};

/// Occupancy grid as read from a MovingAI `.map` file. The original cell
/// characters are kept so the map renders back unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    cells: Vec<u8>,
}

const PASSABLE: &[u8] = b".G";
const BLOCKED: &[u8] = b"@OTSW";

impl GridMap {
    /// Fully passable `width x height` map.
    pub fn open(width: usize, height: usize) -> Self {
        GridMap {
            width,
            height,
            cells: vec![b'.'; width * height],
        }
    }

    /// Builds a map from rows of cell characters.
    pub fn from_rows<R: AsRef<str>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut cells = Vec::with_capacity(width * height);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref().as_bytes();
            if row.len() != width {
                return Err(Error::parse(
                    i + 1,
                    format!("row has {} cells, expected {width}", row.len()),
                ));
            }
            for &c in row {
                if !PASSABLE.contains(&c) && !BLOCKED.contains(&c) {
                    return Err(Error::parse(i + 1, format!("unknown cell character {:?}", c as char)));
                }
            }
            cells.extend_from_slice(row);
        }
        Ok(GridMap { width, height, cells })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_passable(&self, row: usize, col: usize) -> bool {
        row < self.height && col < self.width && PASSABLE.contains(&self.cells[row * self.width + col])
    }

    pub fn set_blocked(&mut self, row: usize, col: usize) {
        self.cells[row * self.width + col] = b'@';
    }

    pub fn passable_count(&self) -> usize {
        self.cells.iter().filter(|c| PASSABLE.contains(c)).count()
    }

    /// MovingAI text form with a normalized header.
    pub fn render(&self) -> String {
        let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", self.height, self.width);
        for row in self.cells.chunks(self.width.max(1)).take(self.height) {
            out.push_str(std::str::from_utf8(row).expect("ascii cells"));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for GridMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses MovingAI map text. LF and CRLF line endings are accepted.
pub fn parse_movingai(text: &str) -> Result<GridMap> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let mut header = |n: usize| lines.next().ok_or_else(|| Error::parse(n, "unexpected end of header"));

    let kind = header(1)?;
    if kind.trim() != "type octile" {
        return Err(Error::parse(1, format!("expected 'type octile', found {kind:?}")));
    }
    let height = header_value(header(2)?, "height", 2)?;
    let width = header_value(header(3)?, "width", 3)?;
    let map = header(4)?;
    if map.trim() != "map" {
        return Err(Error::parse(4, format!("expected 'map', found {map:?}")));
    }

    let mut cells = Vec::with_capacity(width * height);
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        let lineno = i + 5;
        if rows == height {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(lineno, format!("more than {height} rows")));
        }
        let bytes = line.as_bytes();
        if bytes.len() != width {
            return Err(Error::parse(
                lineno,
                format!("row has {} cells, expected {width}", bytes.len()),
            ));
        }
        for &c in bytes {
            if !PASSABLE.contains(&c) && !BLOCKED.contains(&c) {
                return Err(Error::parse(lineno, format!("unknown cell character {:?}", c as char)));
            }
        }
        cells.extend_from_slice(bytes);
        rows += 1;
    }
    if rows != height {
        return Err(Error::parse(
            4 + rows + 1,
            format!("found {rows} rows, expected {height}"),
        ));
    }
    Ok(GridMap { width, height, cells })
}

fn header_value(line: &str, key: &str, lineno: usize) -> Result<usize> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad {key} value {v:?}"))),
        _ => Err(Error::parse(lineno, format!("expected '{key} <n>', found {line:?}"))),
    }
}

/// Whether a diagonal move may pass a blocked orthogonal neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CornerCutting {
    Allow,
    #[default]
    Forbid,
}

impl FromStr for CornerCutting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "allow" => Ok(CornerCutting::Allow),
            "forbid" => Ok(CornerCutting::Forbid),
            _ => Err(Error::usage(format!("corner cutting must be allow|forbid, got {s:?}"))),
        }
    }
}

/// 8-connected topology over the passable cells, vertices numbered in
/// row-major order. Every edge is emitted in both directions.
pub fn grid_to_graph(map: &GridMap, corner_cutting: CornerCutting) -> Topology {
    let (w, h) = (map.width, map.height);
    let mut lookup = vec![None; w * h];
    let mut cells = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if map.is_passable(r, c) {
                lookup[r * w + c] = Some(VertexId(cells.len() as u32));
                cells.push((r as u32, c as u32));
            }
        }
    }
    let mut arcs = Vec::new();
    for (v, &(r, c)) in cells.iter().enumerate() {
        let (r, c) = (r as isize, c as isize);
        for dr in -1isize..=1 {
            for dc in -1isize..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (nr, nc) = (r + dr, c + dc);
                if nr < 0 || nc < 0 || !map.is_passable(nr as usize, nc as usize) {
                    continue;
                }
                if dr != 0
                    && dc != 0
                    && corner_cutting == CornerCutting::Forbid
                    && !(map.is_passable(r as usize, nc as usize) && map.is_passable(nr as usize, c as usize))
                {
                    continue;
                }
                let u = lookup[nr as usize * w + nc as usize].expect("passable cell has a vertex");
                arcs.push((v as u32, u.0));
            }
        }
    }
    let geometry = Geometry::Grid(GridGeometry {
        width: w,
        height: h,
        cells,
        lookup,
    });
    let n = match &geometry {
        Geometry::Grid(g) => g.cells.len(),
        Geometry::LonLat(_) => unreachable!(),
    };
    Topology::from_arcs(n, &arcs, Some(geometry), true).expect("grid arcs are well formed")
}
