//! Color naming and dominant-color extraction.
//!
//! The fourteen reference RGB values ship as data (`data/colors.json`); a
//! color name is the nearest reference by Euclidean distance, ties resolving
//! to the earlier table entry. Dominant colors come from a 3-bit-per-channel
//! quantization over a raster region.

use std::sync::LazyLock;

use serde::Deserialize;

use crate::ast::ColorName;
use crate::geometry::BBox;
use crate::ppm::Raster;

const COLORS_JSON: &str = include_str!("../data/colors.json");

#[derive(Deserialize)]
struct ColorsDoc {
    colors: Vec<ColorEntry>,
}

#[derive(Deserialize)]
struct ColorEntry {
    name: String,
    rgb: [u8; 3],
}

/// Reference table, in tie-break order.
pub fn reference_colors() -> &'static [(ColorName, [u8; 3])] {
    static TABLE: LazyLock<Vec<(ColorName, [u8; 3])>> = LazyLock::new(|| {
        let doc: ColorsDoc =
            serde_json::from_str(COLORS_JSON).expect("builtin color table is valid");
        doc.colors
            .iter()
            .map(|e| {
                let name = ColorName::from_name(&e.name)
                    .expect("builtin color table names are canonical");
                (name, e.rgb)
            })
            .collect()
    });
    &TABLE
}

fn distance_sq(a: [u8; 3], b: [u8; 3]) -> i64 {
    let d = |x: u8, y: u8| {
        let d = i64::from(x) - i64::from(y);
        d * d
    };
    d(a[0], b[0]) + d(a[1], b[1]) + d(a[2], b[2])
}

/// Name the nearest reference color. Ties break toward the earlier table
/// entry, so equal inputs always name the same color.
pub fn name_color(rgb: [u8; 3]) -> ColorName {
    let mut best = (ColorName::Black, i64::MAX);
    for &(name, reference) in reference_colors() {
        let d = distance_sq(rgb, reference);
        if d < best.1 {
            best = (name, d);
        }
    }
    best.0
}

/// Quantize the raster pixels under `bbox` to 3 bits per channel and return
/// the centers of the three most populated buckets, most populated first.
/// Count ties break toward the lower bucket index (r, then g, then b).
///
/// Pixels are included when their integer coordinates fall inside the box
/// rounded outward (floor of the origin, ceiling of the far edge).
pub fn extract_dominant_colors(raster: &Raster, bbox: &BBox) -> Vec<[u8; 3]> {
    let x0 = bbox.x.floor().max(0.0) as usize;
    let y0 = bbox.y.floor().max(0.0) as usize;
    let x1 = ((bbox.x + bbox.w).ceil().max(0.0) as usize).min(raster.width);
    let y1 = ((bbox.y + bbox.h).ceil().max(0.0) as usize).min(raster.height);

    let mut counts = [0u64; 512];
    for y in y0..y1 {
        for x in x0..x1 {
            let [r, g, b] = raster.pixel(x, y);
            let key = ((r >> 5) as usize) << 6 | ((g >> 5) as usize) << 3 | (b >> 5) as usize;
            counts[key] += 1;
        }
    }

    let mut ranked: Vec<(usize, u64)> = counts
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
        .into_iter()
        .take(3)
        .map(|(key, _)| {
            let center = |bits: usize| ((bits as u8) << 5) + 16;
            let r = center((key >> 6) & 0b111);
            let g = center((key >> 3) & 0b111);
            let b = center(key & 0b111);
            [r, g, b]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_all_fourteen_names_in_order() {
        let table = reference_colors();
        assert_eq!(table.len(), 14);
        for (i, name) in ColorName::ALL.iter().enumerate() {
            assert_eq!(table[i].0, *name);
        }
    }

    #[test]
    fn exact_references_name_themselves() {
        for &(name, rgb) in reference_colors() {
            assert_eq!(name_color(rgb), name, "{}", name.name());
        }
    }

    #[test]
    fn near_misses_resolve_sensibly() {
        assert_eq!(name_color([250, 10, 10]), ColorName::Red);
        assert_eq!(name_color([130, 125, 128]), ColorName::Gray);
        assert_eq!(name_color([6, 6, 6]), ColorName::Black);
        assert_eq!(name_color([200, 120, 40]), ColorName::Orange);
    }

    #[test]
    fn ties_break_toward_the_earlier_entry() {
        // (96,96,96) is equidistant from dark gray (64^3) and gray (128^3);
        // dark gray comes first in the table.
        assert_eq!(name_color([96, 96, 96]), ColorName::DarkGray);
    }

    #[test]
    fn dominant_colors_of_a_uniform_patch() {
        let raster = Raster::solid(8, 8, [255, 0, 0]);
        let colors = extract_dominant_colors(&raster, &BBox::new(0.0, 0.0, 8.0, 8.0));
        assert_eq!(colors, vec![[240, 16, 16]]);
        assert_eq!(name_color(colors[0]), ColorName::Red);
    }

    #[test]
    fn dominant_colors_rank_by_population() {
        let mut raster = Raster::solid(4, 4, [0, 0, 255]);
        // Recolor one row green: 4 of 16 pixels.
        for x in 0..4 {
            raster.set_pixel(x, 0, [0, 255, 0]);
        }
        let colors = extract_dominant_colors(&raster, &BBox::new(0.0, 0.0, 4.0, 4.0));
        assert_eq!(colors.len(), 2);
        assert_eq!(colors[0], [16, 16, 240]);
        assert_eq!(colors[1], [16, 240, 16]);
    }

    #[test]
    fn extraction_respects_the_bbox() {
        let mut raster = Raster::solid(8, 8, [255, 255, 255]);
        for y in 0..8 {
            for x in 0..4 {
                raster.set_pixel(x, y, [0, 0, 0]);
            }
        }
        let left = extract_dominant_colors(&raster, &BBox::new(0.0, 0.0, 4.0, 8.0));
        assert_eq!(left, vec![[16, 16, 16]]);
        let right = extract_dominant_colors(&raster, &BBox::new(4.0, 0.0, 4.0, 8.0));
        assert_eq!(right, vec![[240, 240, 240]]);
    }
}
