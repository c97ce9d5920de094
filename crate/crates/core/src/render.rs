//! Staircase pictures of diagrams on rank-2 character lattices.
//!
//! Each maximal cone gets one panel over a square window of `M`: `x` marks
//! a point of `Δ^σ`, `o` a point of `𝒞^σ ∖ Δ^σ` and `.` a point outside
//! `𝒞^σ`.

use std::fmt::Write as _;

use crate::diagram::KlyachkoDiagram;
use crate::error::{Error, Result};
use crate::toric::Character;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    Delta,
    Member,
    Outside,
}

fn check_rank(diag: &KlyachkoDiagram) -> Result<()> {
    let n = diag.fan().dim();
    if n != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: n,
        });
    }
    Ok(())
}

/// A window reaching two steps past every finite bound, and at least 3.
pub fn default_radius(diag: &KlyachkoDiagram) -> i64 {
    let fan = diag.fan();
    let mut r = 3;
    for &ci in fan.max_cone_indices() {
        let frame = fan.frame(ci);
        for cell in diag.entry(ci).delta.cells() {
            let corners: Vec<i64> = cell
                .bounds
                .iter()
                .map(|b| b.hi.or(b.lo).unwrap_or(0))
                .collect();
            if let Some(m) = frame.from_coords(&corners) {
                r = r.max(m.0.iter().map(|v| v.abs()).max().unwrap_or(0) + 2);
            }
        }
    }
    r
}

fn panels(diag: &KlyachkoDiagram, radius: i64) -> Vec<(Vec<usize>, Vec<Vec<Mark>>)> {
    let fan = diag.fan();
    fan.max_cone_indices()
        .iter()
        .map(|&ci| {
            let e = diag.entry(ci);
            let rows = (-radius..=radius)
                .rev()
                .map(|y| {
                    (-radius..=radius)
                        .map(|x| {
                            let m = Character(vec![x, y]);
                            if e.delta.contains(&m) {
                                Mark::Delta
                            } else if e.c.contains(&m) {
                                Mark::Member
                            } else {
                                Mark::Outside
                            }
                        })
                        .collect()
                })
                .collect();
            (fan.cones()[ci].clone(), rows)
        })
        .collect()
}

pub fn render_ascii(diag: &KlyachkoDiagram, radius: Option<i64>) -> Result<String> {
    check_rank(diag)?;
    let radius = radius.unwrap_or_else(|| default_radius(diag));
    let mut out = String::new();
    for (cone, rows) in panels(diag, radius) {
        writeln!(out, "cone {cone:?}").unwrap();
        for (i, row) in rows.iter().enumerate() {
            let y = radius - i as i64;
            let line: String = row
                .iter()
                .map(|m| match m {
                    Mark::Delta => 'x',
                    Mark::Member => 'o',
                    Mark::Outside => '.',
                })
                .collect::<Vec<_>>()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{y:>4} | {line}").unwrap();
        }
        writeln!(out, "       m1 from {} to {}", -radius, radius).unwrap();
        out.push('\n');
    }
    Ok(out)
}

pub fn render_svg(diag: &KlyachkoDiagram, radius: Option<i64>) -> Result<String> {
    check_rank(diag)?;
    let radius = radius.unwrap_or_else(|| default_radius(diag));
    let step = 16;
    let side = (2 * radius + 1) * step;
    let gap = 24;
    let panels = panels(diag, radius);
    let width = panels.len() as i64 * (side + gap) + gap;
    let height = side + 2 * gap;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    for (k, (cone, rows)) in panels.iter().enumerate() {
        let x0 = gap + k as i64 * (side + gap);
        let y0 = gap;
        writeln!(
            out,
            r#"  <text x="{x0}" y="{}" font-family="monospace" font-size="12">cone {cone:?}</text>"#,
            y0 - 8
        )
        .unwrap();
        for (i, row) in rows.iter().enumerate() {
            for (j, mark) in row.iter().enumerate() {
                let cx = x0 + j as i64 * step + step / 2;
                let cy = y0 + i as i64 * step + step / 2;
                if *mark == Mark::Member {
                    writeln!(
                        out,
                        r##"  <rect x="{}" y="{}" width="{step}" height="{step}" fill="#d0d0d0"/>"##,
                        cx - step / 2,
                        cy - step / 2
                    )
                    .unwrap();
                }
                let (fill, r) = match mark {
                    Mark::Delta => ("black", 4),
                    _ => ("none", 2),
                };
                writeln!(
                    out,
                    r#"  <circle cx="{cx}" cy="{cy}" r="{r}" fill="{fill}" stroke="black"/>"#
                )
                .unwrap();
            }
        }
        // axes through the origin
        let ox = x0 + radius * step + step / 2;
        let oy = y0 + radius * step + step / 2;
        writeln!(
            out,
            r#"  <line x1="{x0}" y1="{oy}" x2="{}" y2="{oy}" stroke="gray"/>"#,
            x0 + side
        )
        .unwrap();
        writeln!(
            out,
            r#"  <line x1="{ox}" y1="{y0}" x2="{ox}" y2="{}" stroke="gray"/>"#,
            y0 + side
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
