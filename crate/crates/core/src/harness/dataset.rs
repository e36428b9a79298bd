use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageBuffer, Rgb};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::illuminant::Illuminant;
use crate::image::{srgb_to_linear, LinearImage};

const IMAGE_EXTENSIONS: &[&str] = &["png", "tif", "tiff", "ppm", "pnm", "pgm"];

/// One ground-truth row, normalized to a unit illuminant.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthRecord {
    pub image_id: String,
    pub illuminant: Illuminant,
}

/// An image with its ground truth.
#[derive(Debug, Clone)]
pub struct Sample {
    pub id: String,
    pub image: LinearImage,
    pub ground_truth: Illuminant,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    /// Matched samples, sorted by id.
    pub samples: Vec<Sample>,
    /// Images skipped for lack of a ground-truth row, and similar notes.
    pub warnings: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    #[serde(alias = "image_id")]
    image: String,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "G")]
    g: f64,
    #[serde(rename = "B")]
    b: f64,
}

fn stem_of(s: &str) -> String {
    Path::new(s)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| s.to_string())
}

/// Reads a ground-truth CSV with header `image,R,G,B`.
pub fn read_ground_truth(path: &Path) -> Result<Vec<GroundTruthRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| Error::Csv { path: path.to_path_buf(), source })?;
    let mut out = Vec::new();
    for (line, row) in reader.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(|source| Error::Csv { path: path.to_path_buf(), source })?;
        let rgb = [row.r, row.g, row.b];
        if rgb.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::Dataset(format!(
                "{}: row {} ({}) has a non-positive illuminant {rgb:?}",
                path.display(),
                line + 2,
                row.image
            )));
        }
        out.push(GroundTruthRecord { image_id: stem_of(&row.image), illuminant: Illuminant::new(rgb)? });
    }
    Ok(out)
}

fn to_linear(dynamic: DynamicImage, linearize: bool) -> Result<LinearImage> {
    let rgb = dynamic.to_rgb16();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let data = rgb
        .pixels()
        .map(|p| {
            p.0.map(|v| {
                let x = v as f64 / u16::MAX as f64;
                if linearize {
                    srgb_to_linear(x)
                } else {
                    x
                }
            })
        })
        .collect();
    LinearImage::new(w, h, data)
}

/// Decodes an 8- or 16-bit PNG/TIFF/PPM file into `[0, 1]`, optionally undoing the sRGB curve.
pub fn load_linear_image(path: &Path, linearize: bool) -> Result<LinearImage> {
    let dynamic = image::open(path).map_err(|source| Error::Image { path: path.to_path_buf(), source })?;
    to_linear(dynamic, linearize)
}

/// Image files in `dir` with a supported extension, sorted by file name.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|source| Error::Io { path: dir.to_path_buf(), source })?.path();
        let supported = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()));
        if path.is_file() && supported {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Image paths matched to ground truth, without decoding anything.
#[derive(Debug, Clone)]
pub struct DatasetIndex {
    pub entries: Vec<(String, PathBuf, Illuminant)>,
    pub warnings: Vec<String>,
}

/// Pairs the images in `image_dir` with rows of `gt_csv` by file stem.
pub fn index_dataset(image_dir: &Path, gt_csv: &Path) -> Result<DatasetIndex> {
    let records = read_ground_truth(gt_csv)?;
    let mut warnings = Vec::new();
    let mut by_id: HashMap<String, Illuminant> = HashMap::new();
    for r in records {
        if by_id.contains_key(&r.image_id) {
            warnings.push(format!("duplicate ground-truth row for {}; keeping the first", r.image_id));
            continue;
        }
        by_id.insert(r.image_id, r.illuminant);
    }
    let mut entries = Vec::new();
    for path in list_images(image_dir)? {
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match by_id.get(&id) {
            Some(&gt) => entries.push((id, path, gt)),
            None => {
                let msg = format!("no ground truth for {}; skipping", path.display());
                log::warn!("{msg}");
                warnings.push(msg);
            }
        }
    }
    Ok(DatasetIndex { entries, warnings })
}

impl DatasetIndex {
    pub fn load(&self, i: usize, linearize: bool) -> Result<Sample> {
        let (id, path, gt) = &self.entries[i];
        Ok(Sample { id: id.clone(), image: load_linear_image(path, linearize)?, ground_truth: *gt })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Loads every image in `image_dir` that has a row in `gt_csv`.
pub fn load_dataset(image_dir: &Path, gt_csv: &Path, linearize: bool) -> Result<Dataset> {
    let index = index_dataset(image_dir, gt_csv)?;
    let samples = (0..index.len()).map(|i| index.load(i, linearize)).collect::<Result<_>>()?;
    Ok(Dataset { samples, warnings: index.warnings })
}

/// Writes each sample as a 16-bit PNG named `<id>.png` plus a `gt.csv`; returns the CSV path.
pub fn write_dataset(dir: &Path, samples: &[Sample]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut csv = String::from("image,R,G,B\n");
    for s in samples {
        let path = dir.join(format!("{}.png", s.id));
        let buf: ImageBuffer<Rgb<u16>, Vec<u16>> = ImageBuffer::from_fn(
            s.image.width() as u32,
            s.image.height() as u32,
            |x, y| Rgb(s.image.pixel(x as usize, y as usize).map(|c| (c * u16::MAX as f64).round() as u16)),
        );
        buf.save(&path).map_err(|source| Error::Image { path: path.clone(), source })?;
        let g = s.ground_truth.rgb();
        csv.push_str(&format!("{},{},{},{}\n", s.id, g[0], g[1], g[2]));
    }
    let csv_path = dir.join("gt.csv");
    fs::write(&csv_path, csv).map_err(|source| Error::Io { path: csv_path.clone(), source })?;
    Ok(csv_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(id: &str, c: [f64; 3]) -> Sample {
        Sample {
            id: id.into(),
            image: LinearImage::uniform(4, 3, c).unwrap(),
            ground_truth: Illuminant::new([0.5, 0.4, 0.3]).unwrap(),
        }
    }

    #[test]
    fn round_trip_and_mismatch_warning() {
        let dir = tempfile::tempdir().unwrap();
        let samples = vec![sample("a", [0.2, 0.4, 0.6]), sample("b", [1.0, 0.0, 0.5]), sample("c", [0.1; 3])];
        let csv = write_dataset(dir.path(), &samples).unwrap();
        let ds = load_dataset(dir.path(), &csv, false).unwrap();
        assert_eq!(ds.samples.len(), 3);
        assert!(ds.warnings.is_empty());
        assert_eq!(ds.samples[1].image.pixel(0, 0), [1.0, 0.0, (0.5f64 * 65535.0).round() / 65535.0]);

        fs::write(&csv, "image,R,G,B\na,1,1,1\nc.png, 0.2 ,0.3,0.4\n").unwrap();
        let ds = load_dataset(dir.path(), &csv, false).unwrap();
        assert_eq!(ds.samples.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(), vec!["a", "c"]);
        assert_eq!(ds.warnings.len(), 1);
        assert!(ds.warnings[0].contains("b.png"));
    }

    #[test]
    fn sixteen_bit_max_is_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("max.tif");
        let buf: ImageBuffer<Rgb<u16>, Vec<u16>> = ImageBuffer::from_pixel(2, 2, Rgb([u16::MAX, 0, 32768]));
        buf.save(&path).unwrap();
        let img = load_linear_image(&path, false).unwrap();
        assert_eq!(img.pixel(1, 1)[0], 1.0);
        assert_eq!(img.pixel(1, 1)[1], 0.0);
    }

    #[test]
    fn eight_bit_ppm_with_linearization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.ppm");
        let buf: ImageBuffer<Rgb<u8>, Vec<u8>> = ImageBuffer::from_pixel(1, 1, Rgb([255, 128, 0]));
        buf.save(&path).unwrap();
        let img = load_linear_image(&path, true).unwrap();
        let px = img.pixel(0, 0);
        assert_eq!(px[0], 1.0);
        assert!((px[1] - srgb_to_linear(128.0 / 255.0)).abs() < 1e-12);
    }

    #[test]
    fn unreadable_file_names_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.png");
        fs::write(&path, b"not a png").unwrap();
        let err = load_linear_image(&path, false).unwrap_err();
        assert!(err.to_string().contains("broken.png"), "{err}");
    }

    #[test]
    fn bad_ground_truth_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("gt.csv");
        fs::write(&csv, "image,R,G,B\na,1,0,1\n").unwrap();
        assert!(matches!(read_ground_truth(&csv), Err(Error::Dataset(_))));
        fs::write(&csv, "image,R,G\na,1,1\n").unwrap();
        assert!(matches!(read_ground_truth(&csv), Err(Error::Csv { .. })));
    }
}
