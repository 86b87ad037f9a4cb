use std::f64::consts::{FRAC_PI_2, TAU};

use super::{ContentSelector, Dimension};

/// Which of a selector's clips a weight applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClipSlot {
    Band(usize),
    Interstitial,
}

impl ContentSelector {
    pub fn bands(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Orbit selectors whose edges cover a full turn wrap around.
    pub fn is_cyclic(&self) -> bool {
        self.dimension == Dimension::OrbitAngle
            && (self.boundaries[self.bands()] - self.boundaries[0] - TAU).abs() < 1e-9
    }
}

/// Clip weights for the listener's current coordinate.
///
/// Inside a band its clip plays alone at weight 1. Within half a crossfade
/// width of an inner edge the two neighbouring bands share an equal-power
/// crossfade and the interstitial clip, if any, swells to its gain at the
/// edge itself. Coordinates beyond the outer edges snap to the nearest band.
pub fn select_content(sel: &ContentSelector, d: f64, orbit: f64) -> Vec<(ClipSlot, f64)> {
    let b = &sel.boundaries;
    let n = sel.bands();
    let half = sel.crossfade_width / 2.0;

    let x = match sel.dimension {
        Dimension::Distance => d,
        // measure from the first edge, within one turn
        Dimension::OrbitAngle => b[0] + (orbit - b[0]).rem_euclid(TAU),
    };

    // (edge position, lower band, upper band)
    let mut edges: Vec<(f64, usize, usize)> = (1..n).map(|k| (b[k], k - 1, k)).collect();
    if sel.is_cyclic() {
        edges.push((b[n], n - 1, 0));
        edges.push((b[0], n - 1, 0));
    }

    for (edge, lower, upper) in edges {
        let mut xe = x;
        if sel.is_cyclic() && edge == b[0] {
            // the seam seen from just above the first edge
            xe = x + TAU;
            if (xe - b[n]).abs() >= half {
                continue;
            }
            return crossfade(sel, xe, b[n], lower, upper);
        }
        if (xe - edge).abs() < half {
            return crossfade(sel, xe, edge, lower, upper);
        }
    }

    let band = if x <= b[0] {
        0
    } else if x >= b[n] {
        match sel.dimension {
            // beyond the last edge: pick whichever end is angularly closer
            Dimension::OrbitAngle if (b[0] + TAU - x) < (x - b[n]) => 0,
            _ => n - 1,
        }
    } else {
        b.partition_point(|&e| e <= x).saturating_sub(1).min(n - 1)
    };
    vec![(ClipSlot::Band(band), 1.0)]
}

fn crossfade(
    sel: &ContentSelector,
    x: f64,
    edge: f64,
    lower: usize,
    upper: usize,
) -> Vec<(ClipSlot, f64)> {
    let w = sel.crossfade_width;
    let u = ((x - (edge - w / 2.0)) / w).clamp(0.0, 1.0);
    let mut out = vec![
        (ClipSlot::Band(lower), (u * FRAC_PI_2).cos()),
        (ClipSlot::Band(upper), (u * FRAC_PI_2).sin()),
    ];
    if let Some(i) = &sel.interstitial {
        let g = 2.0 * u.min(1.0 - u) * i.gain;
        if g > 0.0 {
            out.push((ClipSlot::Interstitial, g));
        }
    }
    out
}
