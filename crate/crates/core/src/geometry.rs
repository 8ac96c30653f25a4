//! Bounding-box arithmetic. Everything here is ratio-based, so results are
//! invariant under uniform scaling and translation of the frame.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ast::Location;
use crate::error::{Error, Result};

/// Axis-aligned box in pixel coordinates, top-left origin.
/// Serialized as `[x, y, w, h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> BBox {
        BBox { x, y, w, h }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    /// Area of the intersection with `other` (zero when disjoint).
    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let ix = (self.x + self.w).min(other.x + other.w) - self.x.max(other.x);
        let iy = (self.y + self.h).min(other.y + other.h) - self.y.max(other.y);
        if ix > 0.0 && iy > 0.0 {
            ix * iy
        } else {
            0.0
        }
    }
}

impl Serialize for BBox {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y, self.w, self.h].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BBox {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<BBox, D::Error> {
        let [x, y, w, h] = <[f64; 4]>::deserialize(deserializer)?;
        for v in [x, y, w, h] {
            if !v.is_finite() {
                return Err(D::Error::custom("bbox coordinates must be finite"));
            }
        }
        Ok(BBox { x, y, w, h })
    }
}

/// Whether strictly more than half of `child`'s area lies inside `parent`.
/// Exactly half does not count.
pub fn majority_contains(parent: &BBox, child: &BBox) -> bool {
    let child_area = child.area();
    child_area > 0.0 && parent.intersection_area(child) / child_area > 0.5
}

/// Which cell of a 3x3 grid over `parent` the center of `child` falls in.
/// The grid divides the parent into equal thirds along each axis; a center
/// exactly on a grid line belongs to the left/upper cell.
///
/// Errors when the child's center lies outside the parent. (Execution never
/// hits this: majority containment forces per-axis overlap above one half,
/// which pins the center strictly inside the parent.)
pub fn quadrant_label(child: &BBox, parent: &BBox) -> Result<Location> {
    let (cx, cy) = child.center();
    let rx = cx - parent.x;
    let ry = cy - parent.y;
    if rx < 0.0 || ry < 0.0 || rx > parent.w || ry > parent.h {
        return Err(Error::Scene(
            "child center lies outside the parent region".into(),
        ));
    }
    Ok(Location::from_grid(third(ry, parent.h), third(rx, parent.w)))
}

/// Index of the third (0, 1, 2) that `v` of `extent` falls in, boundaries
/// rounding toward the lower index.
fn third(v: f64, extent: f64) -> usize {
    let scaled = v * 3.0;
    if scaled <= extent {
        0
    } else if scaled <= extent * 2.0 {
        1
    } else {
        2
    }
}

/// Horizontal position of a box within the frame, by center: "left of
/// frame", "center of frame", or "right of frame".
pub fn frame_position_phrase(bbox: &BBox, frame_width: f64) -> &'static str {
    let (cx, _) = bbox.center();
    match third(cx, frame_width) {
        0 => "left of frame",
        1 => "center of frame",
        _ => "right of frame",
    }
}
