//! Map sources for experiments: `.map` files on disk, or a seeded synthetic
//! corpus of cave and room-and-corridor maps shaped like game levels.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ingest::{grid_to_graph, parse_movingai, CornerCutting, GridMap};

/// Reads one `.map` file, or every `.map` file in a directory in file-name
/// order. Ids are file stems.
pub fn load_maps(path: &Path) -> Result<Vec<(String, GridMap)>> {
    let files = if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "map"))
            .collect();
        files.sort();
        files
    } else {
        vec![path.to_path_buf()]
    };
    if files.is_empty() {
        return Err(Error::usage(format!("no .map files in {}", path.display())));
    }
    files
        .into_iter()
        .map(|f| {
            let text = std::fs::read_to_string(&f)?;
            let map = parse_movingai(&text).map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse {
                    line,
                    message: format!("{}: {message}", f.display()),
                },
                other => other,
            })?;
            let id = f
                .file_stem()
                .map_or_else(|| f.display().to_string(), |s| s.to_string_lossy().into_owned());
            Ok((id, map))
        })
        .collect()
}

/// `k` evenly spaced entries of `items` (all of them when `k >= len`).
pub fn spread<T: Clone>(items: &[T], k: usize) -> Vec<T> {
    if k >= items.len() {
        return items.to_vec();
    }
    (0..k).map(|i| items[i * items.len() / k].clone()).collect()
}

/// Cellular-automaton cave: random fill, a few smoothing passes, then
/// everything outside the largest open region is walled off.
pub fn cave_map(width: usize, height: usize, fill: f64, seed: u64) -> GridMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wall = vec![false; width * height];
    for r in 0..height {
        for c in 0..width {
            let border = r == 0 || c == 0 || r + 1 == height || c + 1 == width;
            wall[r * width + c] = border || rng.gen_bool(fill);
        }
    }
    for _ in 0..5 {
        let mut next = wall.clone();
        for r in 1..height.saturating_sub(1) {
            for c in 1..width.saturating_sub(1) {
                let mut n = 0;
                for dr in -1i64..=1 {
                    for dc in -1i64..=1 {
                        if (dr, dc) != (0, 0) && wall[(r as i64 + dr) as usize * width + (c as i64 + dc) as usize] {
                            n += 1;
                        }
                    }
                }
                next[r * width + c] = n >= 5 || (wall[r * width + c] && n >= 4);
            }
        }
        wall = next;
    }
    keep_largest_region(to_map(width, height, &wall))
}

/// Rectangular rooms joined by L-shaped corridors of width 1 to 3, with a
/// sprinkling of pillars inside larger rooms.
pub fn rooms_map(width: usize, height: usize, seed: u64) -> GridMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wall = vec![true; width * height];
    let carve = |wall: &mut Vec<bool>, r0: usize, c0: usize, r1: usize, c1: usize| {
        for r in r0.max(1)..=r1.min(height - 2) {
            for c in c0.max(1)..=c1.min(width - 2) {
                wall[r * width + c] = false;
            }
        }
    };
    let mut centers = Vec::new();
    let target = (width * height) / 180 + 4;
    for _ in 0..target * 4 {
        if centers.len() == target {
            break;
        }
        let h = rng.gen_range(4..=(height / 4).max(5));
        let w = rng.gen_range(4..=(width / 4).max(5));
        if h + 2 >= height || w + 2 >= width {
            continue;
        }
        let r = rng.gen_range(1..height - h - 1);
        let c = rng.gen_range(1..width - w - 1);
        carve(&mut wall, r, c, r + h - 1, c + w - 1);
        if h >= 7 && w >= 7 {
            for _ in 0..rng.gen_range(0..4) {
                let pr = rng.gen_range(r + 2..r + h - 2);
                let pc = rng.gen_range(c + 2..c + w - 2);
                wall[pr * width + pc] = true;
            }
        }
        centers.push((r + h / 2, c + w / 2));
    }
    for k in 1..centers.len() {
        let (a, b) = (centers[k - 1], centers[k]);
        let t = rng.gen_range(0..3);
        let (r_lo, r_hi) = (a.0.min(b.0), a.0.max(b.0));
        let (c_lo, c_hi) = (a.1.min(b.1), a.1.max(b.1));
        if rng.gen_bool(0.5) {
            carve(&mut wall, a.0, c_lo, a.0 + t, c_hi + t);
            carve(&mut wall, r_lo, b.1, r_hi + t, b.1 + t);
        } else {
            carve(&mut wall, r_lo, a.1, r_hi + t, a.1 + t);
            carve(&mut wall, b.0, c_lo, b.0 + t, c_hi + t);
        }
    }
    keep_largest_region(to_map(width, height, &wall))
}

/// `count` synthetic maps alternating caves and room layouts, 48 to 96 cells
/// on a side. Ids are `synthetic-NN`.
pub fn synthetic_corpus(count: usize, seed: u64) -> Vec<(String, GridMap)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let w = rng.gen_range(48..=96);
            let h = rng.gen_range(48..=96);
            let s: u64 = rng.gen();
            let map = if i % 2 == 0 {
                cave_map(w, h, 0.42, s)
            } else {
                rooms_map(w, h, s)
            };
            (format!("synthetic-{i:02}"), map)
        })
        .collect()
}

fn to_map(width: usize, height: usize, wall: &[bool]) -> GridMap {
    let mut map = GridMap::open(width, height);
    for r in 0..height {
        for c in 0..width {
            if wall[r * width + c] {
                map.set_blocked(r, c);
            }
        }
    }
    map
}

fn keep_largest_region(mut map: GridMap) -> GridMap {
    let topo = grid_to_graph(&map, CornerCutting::Forbid);
    let (labels, count) = topo.components();
    if count <= 1 {
        return map;
    }
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l as usize] += 1;
    }
    let biggest = (0..count)
        .max_by_key(|&i| (sizes[i], std::cmp::Reverse(i)))
        .expect("non-empty") as u32;
    let grid = topo.grid().expect("grid topology");
    for (v, &l) in labels.iter().enumerate() {
        if l != biggest {
            let (r, c) = grid.cells[v];
            map.set_blocked(r as usize, c as usize);
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_maps_are_connected_and_deterministic() {
        let a = synthetic_corpus(4, 3);
        let b = synthetic_corpus(4, 3);
        for ((ia, ma), (ib, mb)) in a.iter().zip(&b) {
            assert_eq!(ia, ib);
            assert_eq!(ma.render(), mb.render());
            let t = grid_to_graph(ma, CornerCutting::Forbid);
            assert_eq!(t.components().1, 1, "{ia}");
            assert!(t.vertex_count() >= 168, "{ia}: {}", t.vertex_count());
        }
    }

    #[test]
    fn spread_picks_evenly() {
        let v: Vec<u32> = (0..10).collect();
        assert_eq!(spread(&v, 3), vec![0, 3, 6]);
        assert_eq!(spread(&v, 20).len(), 10);
    }

    #[test]
    fn load_directory_in_name_order() {
        let dir = std::env::temp_dir().join(format!("vbmo-corpus-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let map = GridMap::open(3, 2).render();
        std::fs::write(dir.join("b.map"), &map).unwrap();
        std::fs::write(dir.join("a.map"), &map).unwrap();
        std::fs::write(dir.join("notes.txt"), "x").unwrap();
        let maps = load_maps(&dir).unwrap();
        assert_eq!(maps.iter().map(|m| m.0.as_str()).collect::<Vec<_>>(), ["a", "b"]);
        std::fs::write(dir.join("c.map"), "type octile\nheight 1\n").unwrap();
        assert!(matches!(load_maps(&dir), Err(Error::Parse { .. })));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
