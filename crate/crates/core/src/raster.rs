//! 8-bit sRGB rasters and PNG I/O.

use std::io::Cursor;
use std::path::Path;

use image::{ColorType, DynamicImage, ImageFormat};

use crate::error::{Error, Result};

/// Interleaved 8-bit RGB or RGBA pixels, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgbImage {
    width: u32,
    height: u32,
    channels: usize,
    data: Vec<u8>,
}

impl SrgbImage {
    pub fn from_rgb(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        Self::with_channels(width, height, 3, data)
    }

    pub fn from_rgba(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        Self::with_channels(width, height, 4, data)
    }

    pub fn from_pixels(width: u32, height: u32, pixels: &[[u8; 3]]) -> Result<Self> {
        Self::from_rgb(width, height, pixels.iter().flatten().copied().collect())
    }

    fn with_channels(width: u32, height: u32, channels: usize, data: Vec<u8>) -> Result<Self> {
        let expected = width as usize * height as usize * channels;
        if data.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{width}x{height}x{channels} image needs {expected} bytes, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// 3 for RGB, 4 for RGBA.
    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn has_alpha(&self) -> bool {
        self.channels == 4
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * self.channels;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// RGB triples in row-major order, alpha dropped.
    pub fn rgb_pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data
            .chunks_exact(self.channels)
            .map(|p| [p[0], p[1], p[2]])
    }

    pub fn same_dimensions(&self, other: &Self) -> Result<()> {
        if self.width == other.width && self.height == other.height {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left_width: self.width,
                left_height: self.height,
                right_width: other.width,
                right_height: other.height,
            })
        }
    }

    pub fn load_png(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_owned(),
            source,
        })?;
        Self::from_dynamic(img, path)
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Self> {
        let path = Path::new("<memory>");
        let img = image::load_from_memory_with_format(bytes, ImageFormat::Png).map_err(|source| {
            Error::Image {
                path: path.to_owned(),
                source,
            }
        })?;
        Self::from_dynamic(img, path)
    }

    fn from_dynamic(img: DynamicImage, path: &Path) -> Result<Self> {
        let (w, h) = (img.width(), img.height());
        match img.color() {
            ColorType::Rgb8 | ColorType::L8 => Self::from_rgb(w, h, img.into_rgb8().into_raw()),
            ColorType::Rgba8 | ColorType::La8 => Self::from_rgba(w, h, img.into_rgba8().into_raw()),
            other => Err(Error::UnsupportedImage {
                path: path.to_owned(),
                message: format!("expected 8 bits per channel, found {other:?}"),
            }),
        }
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let mut buf = Cursor::new(Vec::new());
        let color = if self.has_alpha() {
            image::ExtendedColorType::Rgba8
        } else {
            image::ExtendedColorType::Rgb8
        };
        image::write_buffer_with_format(&mut buf, &self.data, self.width, self.height, color, ImageFormat::Png)
            .map_err(|source| Error::Image {
                path: "<memory>".into(),
                source,
            })?;
        Ok(buf.into_inner())
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes = self.encode_png()?;
        std::fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
    }
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global
/// rayon pool when `workers` is `None`.
pub(crate) fn run_with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
