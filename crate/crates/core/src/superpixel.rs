//! SLIC superpixels: k-means in the joint (Lab, x, y) space from grid seeds,
//! followed by a connectivity pass that folds small fragments into neighbors.

use std::collections::VecDeque;

use crate::color::{rgb_to_lab_unchecked, LabColor};
use crate::error::{Error, Result};
use crate::image::LinearImage;

/// SLIC settings. Defaults: 800 segments, compactness 10, 10 iterations.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SlicParams {
    pub target_segments: usize,
    /// Weight of spatial distance against Lab distance.
    pub compactness: f64,
    pub iterations: usize,
}

impl Default for SlicParams {
    fn default() -> Self {
        Self { target_segments: 800, compactness: 10.0, iterations: 10 }
    }
}

/// A partition of an image into labeled segments.
///
/// Labels are dense in `[0, n)` and every label owns at least one pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpixelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    means: Vec<[f64; 3]>,
    sizes: Vec<usize>,
}

impl SuperpixelMap {
    /// Builds a map from an explicit label array. Labels must cover `[0, n)` densely.
    pub fn from_labels(img: &LinearImage, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != img.len() {
            return Err(Error::InvalidInput(format!(
                "label count {} does not match pixel count {}",
                labels.len(),
                img.len()
            )));
        }
        let n = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut sums = vec![[0.0f64; 3]; n];
        let mut sizes = vec![0usize; n];
        for (px, &l) in img.pixels().iter().zip(&labels) {
            let s = &mut sums[l as usize];
            s[0] += px[0];
            s[1] += px[1];
            s[2] += px[2];
            sizes[l as usize] += 1;
        }
        if let Some(unused) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidInput(format!("label {unused} has no pixels")));
        }
        let means = sums
            .iter()
            .zip(&sizes)
            .map(|(s, &k)| s.map(|v| v / k as f64))
            .collect();
        Ok(Self { width: img.width(), height: img.height(), labels, means, sizes })
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label_at(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Mean linear RGB of each segment.
    pub fn means(&self) -> &[[f64; 3]] {
        &self.means
    }

    /// Pixel count of each segment.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_pixels(&self) -> usize {
        self.labels.len()
    }
}

/// Every pixel becomes its own segment.
pub fn as_single_pixels(img: &LinearImage) -> SuperpixelMap {
    SuperpixelMap {
        width: img.width(),
        height: img.height(),
        labels: (0..img.len() as u32).collect(),
        means: img.pixels().to_vec(),
        sizes: vec![1; img.len()],
    }
}

/// Grid of seed counts `(nx, ny)` whose product approximates `target` while
/// keeping cells close to square.
fn seed_grid(width: usize, height: usize, target: usize) -> (usize, usize) {
    let aspect = width as f64 / height as f64;
    let nx = ((target as f64 * aspect).sqrt().round() as usize).clamp(1, width);
    let ny = ((target as f64 / nx as f64).round() as usize).clamp(1, height);
    let nx = ((target as f64 / ny as f64).round() as usize).clamp(1, width);
    (nx, ny)
}

#[derive(Debug, Clone, Copy)]
struct Center {
    lab: LabColor,
    x: f64,
    y: f64,
}

/// Segments `img` into roughly `params.target_segments` compact superpixels.
///
/// The final count can differ from the target: orphan fragments smaller than a quarter
/// of the mean segment area are merged into their largest neighbor, and a cluster split
/// into several large pieces yields one segment per piece. Output is deterministic.
pub fn segment(img: &LinearImage, params: &SlicParams) -> Result<SuperpixelMap> {
    let (w, h) = (img.width(), img.height());
    let npix = img.len();
    if params.target_segments == 0 || params.target_segments > npix {
        return Err(Error::InvalidArgument(format!(
            "target_segments must be in [1, {npix}], got {}",
            params.target_segments
        )));
    }
    if !(params.compactness.is_finite() && params.compactness > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "compactness must be positive, got {}",
            params.compactness
        )));
    }
    if params.iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be at least 1".into()));
    }

    let lab: Vec<LabColor> = img.pixels().iter().map(|&c| rgb_to_lab_unchecked(c)).collect();
    let (nx, ny) = seed_grid(w, h, params.target_segments);
    let k = nx * ny;
    let step = (npix as f64 / k as f64).sqrt();
    let spatial_weight = (params.compactness / step).powi(2);
    let radius = step.ceil() as isize;

    // seeds sit at the geometric centers of the grid cells, in pixel-index coordinates
    let mut centers = Vec::with_capacity(k);
    for j in 0..ny {
        let y = (j as f64 + 0.5) * h as f64 / ny as f64 - 0.5;
        for i in 0..nx {
            let x = (i as f64 + 0.5) * w as f64 / nx as f64 - 0.5;
            let p = (y.round() as usize).min(h - 1) * w + (x.round() as usize).min(w - 1);
            centers.push(Center { lab: lab[p], x, y });
        }
    }

    // Initial labels are the seed grid cells, so pixels outside every search
    // window still have an owner.
    let mut labels: Vec<u32> = (0..npix)
        .map(|p| {
            let (x, y) = (p % w, p / w);
            let cx = (x * nx / w).min(nx - 1);
            let cy = (y * ny / h).min(ny - 1);
            (cy * nx + cx) as u32
        })
        .collect();
    let mut dist = vec![f64::INFINITY; npix];

    for _ in 0..params.iterations {
        dist.fill(f64::INFINITY);
        for (ci, c) in centers.iter().enumerate() {
            let cx = c.x.round() as isize;
            let cy = c.y.round() as isize;
            let x0 = (cx - radius).max(0) as usize;
            let x1 = ((cx + radius) as usize).min(w - 1);
            let y0 = (cy - radius).max(0) as usize;
            let y1 = ((cy + radius) as usize).min(h - 1);
            for y in y0..=y1 {
                let dy = y as f64 - c.y;
                let row = y * w;
                for x in x0..=x1 {
                    let p = row + x;
                    let q = lab[p];
                    let dl = q.l - c.lab.l;
                    let da = q.a - c.lab.a;
                    let db = q.b - c.lab.b;
                    let dx = x as f64 - c.x;
                    let d = dl * dl + da * da + db * db + (dx * dx + dy * dy) * spatial_weight;
                    if d < dist[p] {
                        dist[p] = d;
                        labels[p] = ci as u32;
                    }
                }
            }
        }

        let mut acc = vec![[0.0f64; 6]; k];
        for (p, &l) in labels.iter().enumerate() {
            let a = &mut acc[l as usize];
            let q = lab[p];
            a[0] += q.l;
            a[1] += q.a;
            a[2] += q.b;
            a[3] += (p % w) as f64;
            a[4] += (p / w) as f64;
            a[5] += 1.0;
        }
        for (c, a) in centers.iter_mut().zip(&acc) {
            if a[5] > 0.0 {
                let n = a[5];
                *c = Center { lab: LabColor::new(a[0] / n, a[1] / n, a[2] / n), x: a[3] / n, y: a[4] / n };
            }
        }
    }

    let min_size = npix / (4 * k);
    let labels = enforce_connectivity(&labels, w, h, min_size);
    SuperpixelMap::from_labels(img, labels)
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }
}

/// Relabels `labels` so every segment is 4-connected, absorbing components with
/// fewer than `min_size` pixels into their largest adjacent component.
fn enforce_connectivity(labels: &[u32], w: usize, h: usize, min_size: usize) -> Vec<u32> {
    let npix = labels.len();
    let mut comp = vec![usize::MAX; npix];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..npix {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let lbl = labels[start];
        comp[start] = id;
        queue.push_back(start);
        let mut count = 0;
        while let Some(p) = queue.pop_front() {
            count += 1;
            let (x, y) = (p % w, p / w);
            let mut visit = |q: usize| {
                if comp[q] == usize::MAX && labels[q] == lbl {
                    comp[q] = id;
                    queue.push_back(q);
                }
            };
            if x > 0 {
                visit(p - 1);
            }
            if x + 1 < w {
                visit(p + 1);
            }
            if y > 0 {
                visit(p - w);
            }
            if y + 1 < h {
                visit(p + w);
            }
        }
        sizes.push(count);
    }

    let ncomp = sizes.len();
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for p in 0..npix {
        let (x, y) = (p % w, p / w);
        let a = comp[p];
        let mut link = |b: usize| {
            if a != b {
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        };
        if x + 1 < w {
            link(comp[p + 1]);
        }
        if y + 1 < h {
            link(comp[p + w]);
        }
    }
    for n in &mut neighbors {
        n.sort_unstable();
        n.dedup();
    }

    let mut sets = DisjointSets { parent: (0..ncomp).collect(), size: sizes };
    for c in 0..ncomp {
        let root = sets.find(c);
        if sets.size[root] >= min_size {
            continue;
        }
        let mut best: Option<(usize, usize)> = None;
        for &nb in &neighbors[c] {
            let r = sets.find(nb);
            if r == root {
                continue;
            }
            let s = sets.size[r];
            if best.is_none_or(|(bs, br)| s > bs || (s == bs && r < br)) {
                best = Some((s, r));
            }
        }
        if let Some((_, target)) = best {
            sets.parent[root] = target;
            sets.size[target] += sets.size[root];
        }
    }

    let mut remap = vec![u32::MAX; ncomp];
    let mut next = 0u32;
    (0..npix)
        .map(|p| {
            let r = sets.find(comp[p]);
            if remap[r] == u32::MAX {
                remap[r] = next;
                next += 1;
            }
            remap[r]
        })
        .collect()
}
