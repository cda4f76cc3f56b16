use super::se::StructuringElement;
use crate::image::GrayImage;

#[derive(Clone, Copy)]
enum Op {
    Max,
    Min,
}

impl Op {
    #[inline]
    fn identity(self) -> u8 {
        match self {
            Op::Max => 0,
            Op::Min => 255,
        }
    }
}

/// Grayscale dilation: maximum over the element placed at each pixel.
pub fn dilate(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    rank_filter(img, se, Op::Max)
}

/// Grayscale erosion: minimum over the element placed at each pixel.
pub fn erode(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    rank_filter(img, se, Op::Min)
}

/// Erosion then dilation.
pub fn open(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    dilate(&erode(img, se), se)
}

/// Dilation then erosion.
pub fn close(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    erode(&dilate(img, se), se)
}

/// Separable-by-rows min/max: every distinct horizontal run of the element
/// is filtered once along the rows, then the rows are combined.
fn rank_filter(img: &GrayImage, se: &StructuringElement, op: Op) -> GrayImage {
    let (w, h) = img.dims();
    if w == 0 || h == 0 {
        return img.clone();
    }
    let mut runs: Vec<(isize, isize)> = se.spans().iter().map(|&(_, lo, hi)| (lo, hi)).collect();
    runs.sort_unstable();
    runs.dedup();

    let src = img.as_slice();
    let filtered: Vec<Vec<u8>> = runs
        .iter()
        .map(|&(lo, hi)| {
            let mut out = vec![0u8; w * h];
            let mut buf = RowBuffers::default();
            for y in 0..h {
                sliding_row(&src[y * w..(y + 1) * w], &mut out[y * w..(y + 1) * w], lo, hi, op, &mut buf);
            }
            out
        })
        .collect();

    let mut out = vec![op.identity(); w * h];
    for &(dy, lo, hi) in se.spans() {
        let run = &filtered[runs.binary_search(&(lo, hi)).expect("run present")];
        for y in 0..h {
            let sy = y as isize + dy;
            if sy < 0 || sy >= h as isize {
                continue;
            }
            let sy = sy as usize;
            let dst = &mut out[y * w..(y + 1) * w];
            let row = &run[sy * w..(sy + 1) * w];
            // Matching outside the loop lets both arms vectorise.
            match op {
                Op::Max => dst.iter_mut().zip(row).for_each(|(d, &s)| *d = (*d).max(s)),
                Op::Min => dst.iter_mut().zip(row).for_each(|(d, &s)| *d = (*d).min(s)),
            }
        }
    }
    GrayImage::from_vec(w, h, out).expect("same dimensions")
}

/// Scratch rows reused across a whole image.
#[derive(Default)]
struct RowBuffers {
    ext: Vec<u8>,
    prefix: Vec<u8>,
    suffix: Vec<u8>,
}

/// `out[x] = op(row[x+lo ..= x+hi])` with the window clipped to the row.
///
/// van Herk / Gil-Werman: the padded row is cut into blocks of the window
/// length; every window spans the tail of one block and the head of the
/// next, so one prefix and one suffix scan give each output in a single
/// comparison.
fn sliding_row(row: &[u8], out: &mut [u8], lo: isize, hi: isize, op: Op, buf: &mut RowBuffers) {
    match op {
        Op::Max => sliding_row_with(row, out, lo, hi, 0, u8::max, buf),
        Op::Min => sliding_row_with(row, out, lo, hi, 255, u8::min, buf),
    }
}

#[inline(always)]
fn sliding_row_with(
    row: &[u8],
    out: &mut [u8],
    lo: isize,
    hi: isize,
    identity: u8,
    pick: impl Fn(u8, u8) -> u8,
    buf: &mut RowBuffers,
) {
    let w = row.len() as isize;
    let k = (hi - lo + 1) as usize;
    let len = row.len() + k - 1;
    buf.ext.clear();
    buf.ext.extend((0..len as isize).map(|j| {
        let src = j + lo;
        if (0..w).contains(&src) { row[src as usize] } else { identity }
    }));
    let ext = &buf.ext;
    buf.prefix.resize(len, identity);
    buf.suffix.resize(len, identity);
    let (g, hsuf) = (&mut buf.prefix, &mut buf.suffix);
    for start in (0..len).step_by(k) {
        let end = (start + k).min(len);
        g[start] = ext[start];
        for j in start + 1..end {
            g[j] = pick(g[j - 1], ext[j]);
        }
        hsuf[end - 1] = ext[end - 1];
        for j in (start..end - 1).rev() {
            hsuf[j] = pick(hsuf[j + 1], ext[j]);
        }
    }
    for (x, o) in out.iter_mut().enumerate() {
        *o = pick(hsuf[x], g[x + k - 1]);
    }
}
