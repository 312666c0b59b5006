//! Binary field files: a one-line JSON header describing the grid, followed
//! by little-endian IEEE-754 (re, im) pairs in row-major order with the
//! direction index slowest, then location, then scale.
//!
//! Direction sets are stored by count and rebuilt as the equidistributed
//! family, the only kind the command line constructs.

use ndarray::{Array2, Array3, ArrayD, IxDyn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ridgelet_core::fourier::SampledField;
use ridgelet_core::grid::{Axis, CartesianGrid, DirectionSet, ScaleGrid};
use ridgelet_core::radon::SinogramField;
use ridgelet_core::ridgelet::RidgeletField;

pub type Error = Box<dyn std::error::Error + Send + Sync>;
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct AxisDescriptor {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisDescriptor {
    fn of(axis: &Axis) -> Self {
        Self {
            min: axis.min(),
            max: axis.max(),
            count: axis.count(),
        }
    }

    fn build(&self) -> Result<Axis> {
        Ok(Axis::new(self.min, self.max, self.count)?)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ScaleDescriptor {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl ScaleDescriptor {
    fn of(scales: &ScaleGrid) -> Self {
        Self {
            min: scales.a_min(),
            max: scales.a_max(),
            count: scales.count(),
        }
    }

    fn build(&self) -> Result<ScaleGrid> {
        Ok(ScaleGrid::new(self.min, self.max, self.count)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldHeader {
    pub kind: String,
    pub dimension: usize,
    pub element: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_axis: Option<AxisDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_axis: Option<AxisDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales: Option<ScaleDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<Vec<AxisDescriptor>>,
}

/// Any of the three field shapes a file can hold.
pub enum StoredField {
    Plane(SampledField),
    Sinogram(SinogramField),
    Ridgelet(RidgeletField),
}

fn write_payload<'a, I>(path: &Path, header: &FieldHeader, values: I) -> Result<()>
where
    I: Iterator<Item = &'a Complex64>,
{
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, header)?;
    out.write_all(b"\n")?;
    for v in values {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_ridgelet(path: &Path, field: &RidgeletField) -> Result<()> {
    let ygrid_dim = field.directions().dim();
    let header = FieldHeader {
        kind: "ridgelet".to_string(),
        dimension: ygrid_dim,
        element: "c128".to_string(),
        directions: Some(field.directions().len()),
        b_axis: Some(AxisDescriptor::of(field.b_axis())),
        p_axis: None,
        scales: Some(ScaleDescriptor::of(field.scales())),
        axes: None,
    };
    let standard = field.values().as_standard_layout();
    write_payload(path, &header, standard.iter())
}

pub fn write_sinogram(path: &Path, field: &SinogramField) -> Result<()> {
    let header = FieldHeader {
        kind: "sinogram".to_string(),
        dimension: field.directions().dim(),
        element: "c128".to_string(),
        directions: Some(field.directions().len()),
        b_axis: None,
        p_axis: Some(AxisDescriptor::of(field.p_axis())),
        scales: None,
        axes: None,
    };
    let standard = field.values().as_standard_layout();
    write_payload(path, &header, standard.iter())
}

pub fn write_plane(path: &Path, field: &SampledField) -> Result<()> {
    let grid = field.grid();
    let axes: Vec<AxisDescriptor> = (0..grid.dim())
        .map(|d| AxisDescriptor::of(grid.axis(d)))
        .collect();
    let header = FieldHeader {
        kind: "field".to_string(),
        dimension: grid.dim(),
        element: "c128".to_string(),
        directions: None,
        b_axis: None,
        p_axis: None,
        scales: None,
        axes: Some(axes),
    };
    let standard = field.values().as_standard_layout();
    write_payload(path, &header, standard.iter())
}

fn read_values(reader: &mut impl Read, expected: usize) -> Result<Vec<Complex64>> {
    let mut payload = Vec::new();
    reader.read_to_end(&mut payload)?;
    if payload.len() != 16 * expected {
        return Err(format!(
            "payload holds {} bytes, expected {} (16 x {expected} elements)",
            payload.len(),
            16 * expected
        )
        .into());
    }
    Ok(payload
        .chunks_exact(16)
        .map(|chunk| {
            Complex64::new(
                f64::from_le_bytes(chunk[..8].try_into().expect("8-byte chunk")),
                f64::from_le_bytes(chunk[8..].try_into().expect("8-byte chunk")),
            )
        })
        .collect())
}

pub fn read_any(path: &Path) -> Result<StoredField> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut header_line = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        let n = reader.read(&mut byte)?;
        if n == 0 {
            return Err("file ended before the header line was terminated".into());
        }
        if byte[0] == b'\n' {
            break;
        }
        header_line.push(byte[0]);
        if header_line.len() > 1 << 16 {
            return Err("header line exceeds 64 KiB".into());
        }
    }
    let header: FieldHeader = serde_json::from_slice(&header_line)?;
    if header.element != "c128" {
        return Err(format!("unsupported element type {:?}", header.element).into());
    }
    match header.kind.as_str() {
        "ridgelet" => {
            let count = header.directions.ok_or("ridgelet header needs directions")?;
            let b_axis = header
                .b_axis
                .ok_or("ridgelet header needs b_axis")?
                .build()?;
            let scales = header.scales.ok_or("ridgelet header needs scales")?.build()?;
            let directions = DirectionSet::equidistributed(header.dimension, count)?;
            let values = read_values(
                &mut reader,
                count * b_axis.count() * scales.count(),
            )?;
            let array =
                Array3::from_shape_vec((count, b_axis.count(), scales.count()), values)?;
            Ok(StoredField::Ridgelet(RidgeletField::new(
                directions, b_axis, scales, array,
            )?))
        }
        "sinogram" => {
            let count = header.directions.ok_or("sinogram header needs directions")?;
            let p_axis = header
                .p_axis
                .ok_or("sinogram header needs p_axis")?
                .build()?;
            let directions = DirectionSet::equidistributed(header.dimension, count)?;
            let values = read_values(&mut reader, count * p_axis.count())?;
            let array = Array2::from_shape_vec((count, p_axis.count()), values)?;
            Ok(StoredField::Sinogram(SinogramField::new(
                directions, p_axis, array,
            )?))
        }
        "field" => {
            let descriptors = header.axes.ok_or("field header needs axes")?;
            if descriptors.len() != header.dimension {
                return Err(format!(
                    "field header declares dimension {} but {} axes",
                    header.dimension,
                    descriptors.len()
                )
                .into());
            }
            let axes: Vec<Axis> = descriptors
                .iter()
                .map(|d| d.build())
                .collect::<Result<_>>()?;
            let shape: Vec<usize> = axes.iter().map(Axis::count).collect();
            let grid = CartesianGrid::new(axes)?;
            let values = read_values(&mut reader, shape.iter().product())?;
            let array: ArrayD<Complex64> = ArrayD::from_shape_vec(IxDyn(&shape), values)?;
            Ok(StoredField::Plane(SampledField::new(grid, array)?))
        }
        other => Err(format!("unknown field kind {other:?}").into()),
    }
}

pub fn read_ridgelet(path: &Path) -> Result<RidgeletField> {
    match read_any(path)? {
        StoredField::Ridgelet(field) => Ok(field),
        _ => Err("file does not hold a ridgelet field".into()),
    }
}

pub fn read_plane(path: &Path) -> Result<SampledField> {
    match read_any(path)? {
        StoredField::Plane(field) => Ok(field),
        _ => Err("file does not hold a sampled field".into()),
    }
}
