//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export has a plain Rust twin returning `grothperm::Result`, which is
//! what the native tests call.

use grothperm::permuton::{limit_height, EmpiricalGrid};
use grothperm::pipedream::sample_permutation;
use grothperm::rng::stream;
use grothperm::{mc, tasep};
use wasm_bindgen::prelude::*;

/// `grid × grid` grayscale of averaged permutation points, row 0 on top
/// holding the largest values.
pub fn heatmap_pixels(n: usize, p: f64, samples: u32, grid: usize, seed: u64) -> grothperm::Result<Vec<u8>> {
    if grid == 0 || grid > n {
        return Err(grothperm::Error::Invalid(format!("grid {grid} must be in 1..={n}")));
    }
    let g = mc::fold(
        seed,
        samples as u64,
        || EmpiricalGrid::new(grid, n),
        |acc, _, rng| acc.add(&sample_permutation(n, p, rng)?),
        |acc, part| acc.merge(part).expect("grids share a shape"),
    )?;
    let gray = g.grayscale();
    Ok((0..grid).rev().flat_map(|r| gray[r * grid..(r + 1) * grid].to_vec()).collect())
}

/// `h°` on the `(grid + 1)^2` corners, row 0 at `y = 1`.
pub fn limit_surface(p: f64, grid: usize) -> grothperm::Result<Vec<f64>> {
    let mut out = Vec::with_capacity((grid + 1) * (grid + 1));
    for r in 0..=grid {
        let y = 1.0 - r as f64 / grid as f64;
        for c in 0..=grid {
            out.push(limit_height(c as f64 / grid as f64, y, p)?);
        }
    }
    Ok(out)
}

/// Positions `ξ_1..ξ_k` for `t = 0, 1, ...`, flattened time-major.
pub fn trajectory_positions(k: usize, n: usize, p: f64, seed: u64) -> grothperm::Result<Vec<i32>> {
    let (path, _) = tasep::trajectory(k, n, p, &mut stream(seed, 0))?;
    Ok(path.into_iter().flatten().map(|x| x as i32).collect())
}

fn js(e: grothperm::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[wasm_bindgen]
pub fn heatmap(n: usize, p: f64, samples: u32, grid: usize, seed: u32) -> Result<Vec<u8>, JsValue> {
    heatmap_pixels(n, p, samples, grid, seed as u64).map_err(js)
}

#[wasm_bindgen]
pub fn limit_shape(p: f64, grid: usize) -> Result<Vec<f64>, JsValue> {
    limit_surface(p, grid).map_err(js)
}

#[wasm_bindgen]
pub fn tasep_trajectory(k: usize, n: usize, p: f64, seed: u32) -> Result<Vec<i32>, JsValue> {
    trajectory_positions(k, n, p, seed as u64).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heatmap_is_normalized() {
        let px = heatmap_pixels(60, 0.5, 20, 10, 1).unwrap();
        assert_eq!(px.len(), 100);
        assert_eq!(px.iter().copied().max(), Some(255));
        assert_eq!(heatmap_pixels(60, 0.5, 20, 10, 1).unwrap(), px);
        assert!(heatmap_pixels(5, 0.5, 1, 6, 1).is_err());
    }

    #[test]
    fn surface_corners() {
        let s = limit_surface(0.5, 4).unwrap();
        assert_eq!(s.len(), 25);
        assert_eq!(s[20], 1.0);
        assert_eq!(s[4], 0.0);
        assert!((s[12] - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn trajectory_from_seed() {
        let t = trajectory_positions(3, 6, 0.5, 2609).unwrap();
        assert_eq!(t, [3, 2, 1, 5, 2, 1, 5, 3, 1, 5, 4, 2, 5, 4, 2, 5, 4, 2]);
    }
}
