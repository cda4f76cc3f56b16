//! Brute-force reference implementations. Slow and obvious on purpose.

#![allow(dead_code)]

use lungct::ensemble::Sample;
use lungct::{BinaryMask, GrayImage};

pub fn disk_offsets(r: usize) -> Vec<(i64, i64)> {
    let r = r as i64;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

fn rank(img: &GrayImage, r: usize, take_max: bool) -> GrayImage {
    let (w, h) = img.dims();
    let offs = disk_offsets(r);
    GrayImage::from_fn(w, h, |x, y| {
        let mut vals = Vec::new();
        for &(dx, dy) in &offs {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h {
                vals.push(img.get(nx as usize, ny as usize));
            }
        }
        if take_max {
            *vals.iter().max().unwrap()
        } else {
            *vals.iter().min().unwrap()
        }
    })
}

pub fn dilate(img: &GrayImage, r: usize) -> GrayImage {
    rank(img, r, true)
}

pub fn erode(img: &GrayImage, r: usize) -> GrayImage {
    rank(img, r, false)
}

pub fn open(img: &GrayImage, r: usize) -> GrayImage {
    dilate(&erode(img, r), r)
}

pub fn close(img: &GrayImage, r: usize) -> GrayImage {
    erode(&dilate(img, r), r)
}

/// 3x3 max (or min) including the centre, clipped at the border.
fn step(img: &GrayImage, take_max: bool) -> GrayImage {
    let (w, h) = img.dims();
    GrayImage::from_fn(w, h, |x, y| {
        let mut best = img.get(x, y);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h {
                    let v = img.get(nx as usize, ny as usize);
                    best = if take_max { best.max(v) } else { best.min(v) };
                }
            }
        }
        best
    })
}

/// Iterated geodesic dilation to stability, 8-connected.
pub fn reconstruct_by_dilation(marker: &GrayImage, mask: &GrayImage) -> GrayImage {
    let clamp = |img: &GrayImage| {
        GrayImage::from_fn(img.width(), img.height(), |x, y| img.get(x, y).min(mask.get(x, y)))
    };
    let mut cur = clamp(marker);
    loop {
        let next = clamp(&step(&cur, true));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn reconstruct_by_erosion(marker: &GrayImage, mask: &GrayImage) -> GrayImage {
    let clamp = |img: &GrayImage| {
        GrayImage::from_fn(img.width(), img.height(), |x, y| img.get(x, y).max(mask.get(x, y)))
    };
    let mut cur = clamp(marker);
    loop {
        let next = clamp(&step(&cur, false));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn open_by_reconstruction(img: &GrayImage, r: usize) -> GrayImage {
    reconstruct_by_dilation(&erode(img, r), img)
}

pub fn close_by_reconstruction(img: &GrayImage, r: usize) -> GrayImage {
    reconstruct_by_erosion(&dilate(img, r), img)
}

/// `I - R(I - 1, I) > 0`: a pixel is a regional maximum exactly when
/// lowering the image by one cannot be rebuilt up to its level.
pub fn regional_maxima(img: &GrayImage) -> BinaryMask {
    let lowered = img.map(|v| v.saturating_sub(1));
    let rebuilt = reconstruct_by_dilation(&lowered, img);
    let (w, h) = img.dims();
    // Zero-valued pixels cannot be lowered; a zero plateau is a maximum
    // only when the whole image is flat at zero.
    let flat_zero = img.max_value() == Some(0);
    BinaryMask::from_fn(w, h, |x, y| {
        let v = img.get(x, y);
        if v == 0 {
            flat_zero
        } else {
            v > rebuilt.get(x, y)
        }
    })
}

pub fn regional_minima(img: &GrayImage) -> BinaryMask {
    regional_maxima(&img.complement())
}

/// Exhaustive greedy tree learner: tries every feature and every threshold
/// halfway between consecutive distinct values, scoring each partition by
/// counting directly and comparing weighted Gini as exact fractions.
pub enum RefTree {
    Leaf(u32, u32),
    Split(usize, f64, Box<RefTree>, Box<RefTree>),
}

impl RefTree {
    pub fn predict(&self, x: &[f64; 3]) -> u8 {
        match self {
            RefTree::Leaf(n0, n1) => u8::from(n1 > n0),
            RefTree::Split(f, t, l, r) => {
                if x[*f] <= *t {
                    l.predict(x)
                } else {
                    r.predict(x)
                }
            }
        }
    }
}

pub fn reference_tree(samples: &[Sample], min_leaf: usize, max_depth: usize) -> RefTree {
    let n1 = samples.iter().filter(|s| s.label == 1).count() as u32;
    let n0 = samples.len() as u32 - n1;
    if n0 == 0 || n1 == 0 || max_depth == 0 {
        return RefTree::Leaf(n0, n1);
    }
    // n * weighted Gini = n - sum over children of (a^2 + b^2) / n_child,
    // so the best split maximises that sum.
    let mut best: Option<(i128, i128, usize, f64)> = None;
    for f in 0..3 {
        let mut vals: Vec<f64> = samples.iter().map(|s| s.features[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for pair in vals.windows(2) {
            let mut t = pair[0] + (pair[1] - pair[0]) / 2.0;
            if t >= pair[1] {
                t = pair[0];
            }
            let (left, right): (Vec<&Sample>, Vec<&Sample>) =
                samples.iter().partition(|s| s.features[f] <= t);
            if left.len() < min_leaf || right.len() < min_leaf {
                continue;
            }
            let sq = |part: &[&Sample]| {
                let a = part.iter().filter(|s| s.label == 1).count() as i128;
                let b = part.len() as i128 - a;
                a * a + b * b
            };
            let (nl, nr) = (left.len() as i128, right.len() as i128);
            let num = sq(&left) * nr + sq(&right) * nl;
            let den = nl * nr;
            let better = match best {
                None => true,
                Some((bn, bd, _, _)) => num * bd > bn * den,
            };
            if better {
                best = Some((num, den, f, t));
            }
        }
    }
    match best {
        None => RefTree::Leaf(n0, n1),
        Some((_, _, f, t)) => {
            let (l, r): (Vec<Sample>, Vec<Sample>) = samples.iter().partition(|s| s.features[f] <= t);
            RefTree::Split(
                f,
                t,
                Box::new(reference_tree(&l, min_leaf, max_depth - 1)),
                Box::new(reference_tree(&r, min_leaf, max_depth - 1)),
            )
        }
    }
}
