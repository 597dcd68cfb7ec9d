//! PLY reader/writer for meshes and point clouds.
//!
//! Supports ascii and binary_little_endian, float/double coordinates, an
//! optional unsigned-char `segment` property for per-vertex labels, and
//! optional uchar red/green/blue. Positions are written as doubles so
//! round-trips are exact. Units are meters.
//!
//! Closed meshes are re-oriented on load: if the signed volume comes out
//! negative every face is flipped, enforcing the counter-clockwise outward
//! convention.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::Point3;

use super::{MeshError, TriangleMesh};
use crate::cloud::{CloudError, LabeledPointCloud};
use crate::labels::SegmentLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Ascii,
    BinaryLittleEndian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    F32,
    F64,
    U8,
    I32,
    U32,
}

impl Scalar {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            "uchar" | "uint8" => Scalar::U8,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::U8 => 1,
            Scalar::F32 | Scalar::I32 | Scalar::U32 => 4,
            Scalar::F64 => 8,
        }
    }
}

#[derive(Debug)]
struct Property {
    name: String,
    scalar: Scalar,
    list_count: Option<Scalar>,
}

#[derive(Debug)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

struct Header {
    format: Format,
    elements: Vec<Element>,
}

fn parse_header<R: BufRead>(reader: &mut R) -> Result<Header, String> {
    let mut line = String::new();
    reader.read_line(&mut line).map_err(|e| e.to_string())?;
    if line.trim() != "ply" {
        return Err("missing ply magic".into());
    }
    let mut format = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        line.clear();
        if reader.read_line(&mut line).map_err(|e| e.to_string())? == 0 {
            return Err("unexpected end of header".into());
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first().copied() {
            Some("comment") | Some("obj_info") | None => continue,
            Some("format") => {
                format = Some(match tokens.get(1) {
                    Some(&"ascii") => Format::Ascii,
                    Some(&"binary_little_endian") => Format::BinaryLittleEndian,
                    other => return Err(format!("unsupported format {other:?}")),
                });
            }
            Some("element") => {
                let name = tokens.get(1).ok_or("element without name")?.to_string();
                let count: usize =
                    tokens.get(2).ok_or("element without count")?.parse().map_err(|_| "bad count")?;
                elements.push(Element { name, count, properties: Vec::new() });
            }
            Some("property") => {
                let element = elements.last_mut().ok_or("property before element")?;
                if tokens.get(1) == Some(&"list") {
                    let count_ty = Scalar::parse(tokens.get(2).ok_or("list without count type")?)
                        .ok_or("unsupported list count type")?;
                    let item_ty = Scalar::parse(tokens.get(3).ok_or("list without item type")?)
                        .ok_or("unsupported list item type")?;
                    let name = tokens.get(4).ok_or("list without name")?.to_string();
                    element.properties.push(Property {
                        name,
                        scalar: item_ty,
                        list_count: Some(count_ty),
                    });
                } else {
                    let ty = Scalar::parse(tokens.get(1).ok_or("property without type")?)
                        .ok_or_else(|| format!("unsupported property type {:?}", tokens.get(1)))?;
                    let name = tokens.get(2).ok_or("property without name")?.to_string();
                    element.properties.push(Property { name, scalar: ty, list_count: None });
                }
            }
            Some("end_header") => break,
            Some(other) => return Err(format!("unexpected header token {other}")),
        }
    }
    Ok(Header { format: format.ok_or("missing format line")?, elements })
}

fn read_scalar_binary<R: Read>(reader: &mut R, scalar: Scalar) -> Result<f64, String> {
    let mut buf = [0u8; 8];
    let size = scalar.size();
    reader.read_exact(&mut buf[..size]).map_err(|e| e.to_string())?;
    Ok(match scalar {
        Scalar::U8 => buf[0] as f64,
        Scalar::F32 => f32::from_le_bytes(buf[..4].try_into().unwrap()) as f64,
        Scalar::F64 => f64::from_le_bytes(buf),
        Scalar::I32 => i32::from_le_bytes(buf[..4].try_into().unwrap()) as f64,
        Scalar::U32 => u32::from_le_bytes(buf[..4].try_into().unwrap()) as f64,
    })
}

struct ParsedVertices {
    points: Vec<Point3<f64>>,
    labels: Option<Vec<SegmentLabel>>,
    colors: Option<Vec<[u8; 3]>>,
}

struct Parsed {
    vertices: ParsedVertices,
    faces: Vec<[u32; 3]>,
}

fn parse_body<R: BufRead>(reader: &mut R, header: &Header) -> Result<Parsed, String> {
    let mut points = Vec::new();
    let mut labels: Vec<SegmentLabel> = Vec::new();
    let mut colors: Vec<[u8; 3]> = Vec::new();
    let mut has_segment = false;
    let mut has_color = false;
    let mut faces = Vec::new();

    for element in &header.elements {
        match element.name.as_str() {
            "vertex" => {
                let idx_of = |name: &str| element.properties.iter().position(|p| p.name == name);
                let (xi, yi, zi) = (
                    idx_of("x").ok_or("vertex without x")?,
                    idx_of("y").ok_or("vertex without y")?,
                    idx_of("z").ok_or("vertex without z")?,
                );
                let si = idx_of("segment");
                let (ri, gi, bi) = (idx_of("red"), idx_of("green"), idx_of("blue"));
                has_segment = si.is_some();
                has_color = ri.is_some() && gi.is_some() && bi.is_some();
                for _ in 0..element.count {
                    let row = read_row(reader, header.format, &element.properties)?;
                    points.push(Point3::new(row[xi][0], row[yi][0], row[zi][0]));
                    if let Some(si) = si {
                        let byte = row[si][0] as u8;
                        labels.push(
                            SegmentLabel::from_byte(byte)
                                .map_err(|e| format!("bad segment value: {e}"))?,
                        );
                    }
                    if has_color {
                        colors.push([
                            row[ri.unwrap()][0] as u8,
                            row[gi.unwrap()][0] as u8,
                            row[bi.unwrap()][0] as u8,
                        ]);
                    }
                }
            }
            "face" => {
                let li = element
                    .properties
                    .iter()
                    .position(|p| p.list_count.is_some())
                    .ok_or("face element without an index list")?;
                for _ in 0..element.count {
                    let row = read_row(reader, header.format, &element.properties)?;
                    let list = &row[li];
                    if list.len() != 3 {
                        return Err(format!("face with {} vertices (triangles only)", list.len()));
                    }
                    faces.push([list[0] as u32, list[1] as u32, list[2] as u32]);
                }
            }
            _ => {
                // Skip unknown elements.
                for _ in 0..element.count {
                    read_row(reader, header.format, &element.properties)?;
                }
            }
        }
    }
    Ok(Parsed {
        vertices: ParsedVertices {
            points,
            labels: has_segment.then_some(labels),
            colors: has_color.then_some(colors),
        },
        faces,
    })
}

fn read_row<R: BufRead>(
    reader: &mut R,
    format: Format,
    properties: &[Property],
) -> Result<Vec<Vec<f64>>, String> {
    match format {
        Format::Ascii => {
            let mut line = String::new();
            loop {
                line.clear();
                if reader.read_line(&mut line).map_err(|e| e.to_string())? == 0 {
                    return Err("unexpected end of data".into());
                }
                if !line.trim().is_empty() {
                    break;
                }
            }
            let mut tokens = line.split_whitespace();
            let mut next = |what: &str| -> Result<f64, String> {
                tokens
                    .next()
                    .ok_or_else(|| format!("missing {what}"))?
                    .parse::<f64>()
                    .map_err(|_| format!("bad {what}"))
            };
            properties
                .iter()
                .map(|p| {
                    if p.list_count.is_some() {
                        let count = next("list count")? as usize;
                        (0..count).map(|_| next("list item")).collect()
                    } else {
                        Ok(vec![next(&p.name)?])
                    }
                })
                .collect()
        }
        Format::BinaryLittleEndian => properties
            .iter()
            .map(|p| {
                if let Some(count_ty) = p.list_count {
                    let count = read_scalar_binary(reader, count_ty)? as usize;
                    (0..count).map(|_| read_scalar_binary(reader, p.scalar)).collect()
                } else {
                    Ok(vec![read_scalar_binary(reader, p.scalar)?])
                }
            })
            .collect(),
    }
}

/// Load a triangle mesh, re-orienting closed meshes to positive volume.
pub fn read_mesh<P: AsRef<Path>>(path: P) -> Result<TriangleMesh, MeshError> {
    let mut reader = BufReader::new(File::open(path)?);
    let header = parse_header(&mut reader).map_err(MeshError::Parse)?;
    let parsed = parse_body(&mut reader, &header).map_err(MeshError::Parse)?;
    let mut mesh = TriangleMesh::new(parsed.vertices.points, parsed.faces)?;
    if let Some(labels) = parsed.vertices.labels {
        mesh = mesh.with_labels(labels)?;
    }
    if mesh.is_watertight() && mesh.signed_volume()? < 0.0 {
        mesh = mesh.flipped();
    }
    Ok(mesh)
}

/// Load a point cloud (faces, if any, are ignored).
pub fn read_cloud<P: AsRef<Path>>(path: P) -> Result<LabeledPointCloud, CloudError> {
    let mut reader = BufReader::new(File::open(path)?);
    let header = parse_header(&mut reader).map_err(CloudError::Parse)?;
    let parsed = parse_body(&mut reader, &header).map_err(CloudError::Parse)?;
    let mut cloud = LabeledPointCloud::new(parsed.vertices.points);
    if let Some(labels) = parsed.vertices.labels {
        cloud = cloud.with_labels(labels)?;
    }
    if let Some(colors) = parsed.vertices.colors {
        cloud = cloud.with_colors(colors)?;
    }
    Ok(cloud)
}

fn write_header<W: Write>(
    w: &mut W,
    ascii: bool,
    vertex_count: usize,
    face_count: Option<usize>,
    with_segment: bool,
    with_color: bool,
) -> std::io::Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format {} 1.0", if ascii { "ascii" } else { "binary_little_endian" })?;
    writeln!(w, "element vertex {vertex_count}")?;
    writeln!(w, "property double x")?;
    writeln!(w, "property double y")?;
    writeln!(w, "property double z")?;
    if with_color {
        writeln!(w, "property uchar red")?;
        writeln!(w, "property uchar green")?;
        writeln!(w, "property uchar blue")?;
    }
    if with_segment {
        writeln!(w, "property uchar segment")?;
    }
    if let Some(faces) = face_count {
        writeln!(w, "element face {faces}")?;
        writeln!(w, "property list uchar int vertex_indices")?;
    }
    writeln!(w, "end_header")
}

fn write_vertices<W: Write>(
    w: &mut W,
    ascii: bool,
    points: &[Point3<f64>],
    labels: Option<&[SegmentLabel]>,
    colors: Option<&[[u8; 3]]>,
) -> std::io::Result<()> {
    for (i, p) in points.iter().enumerate() {
        if ascii {
            write!(w, "{} {} {}", p.x, p.y, p.z)?;
            if let Some(colors) = colors {
                write!(w, " {} {} {}", colors[i][0], colors[i][1], colors[i][2])?;
            }
            if let Some(labels) = labels {
                write!(w, " {}", labels[i].as_byte())?;
            }
            writeln!(w)?;
        } else {
            w.write_all(&p.x.to_le_bytes())?;
            w.write_all(&p.y.to_le_bytes())?;
            w.write_all(&p.z.to_le_bytes())?;
            if let Some(colors) = colors {
                w.write_all(&colors[i])?;
            }
            if let Some(labels) = labels {
                w.write_all(&[labels[i].as_byte()])?;
            }
        }
    }
    Ok(())
}

/// Write a mesh; `ascii` selects the text encoding, otherwise binary
/// little-endian.
pub fn write_mesh<P: AsRef<Path>>(path: P, mesh: &TriangleMesh, ascii: bool) -> Result<(), MeshError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_header(
        &mut w,
        ascii,
        mesh.vertex_count(),
        Some(mesh.face_count()),
        mesh.labels().is_some(),
        false,
    )?;
    write_vertices(&mut w, ascii, mesh.vertices(), mesh.labels(), None)?;
    for f in mesh.faces() {
        if ascii {
            writeln!(w, "3 {} {} {}", f[0], f[1], f[2])?;
        } else {
            w.write_all(&[3u8])?;
            for &v in f {
                w.write_all(&(v as i32).to_le_bytes())?;
            }
        }
    }
    Ok(())
}

/// Write a point cloud.
pub fn write_cloud<P: AsRef<Path>>(
    path: P,
    cloud: &LabeledPointCloud,
    ascii: bool,
) -> Result<(), CloudError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_header(
        &mut w,
        ascii,
        cloud.len(),
        None,
        cloud.labels().is_some(),
        cloud.colors().is_some(),
    )?;
    write_vertices(&mut w, ascii, cloud.points(), cloud.labels(), cloud.colors())?;
    Ok(())
}
