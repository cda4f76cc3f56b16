//! Minimal DICOM part-10 reader (and fixture writer).
//!
//! Supports little-endian explicit-VR and implicit-VR transfer syntaxes with
//! native (uncompressed) pixel data. Sequences are skipped, never decoded.
//! Only the handful of attributes the pipeline needs are interpreted; every
//! other dataset element is kept as raw bytes in [`DicomObject::tags`].

use std::collections::BTreeMap;
use std::fmt;

use log::warn;

use crate::error::{Error, Result};

/// DICOM attribute tag `(group, element)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(pub u16, pub u16);

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:04X},{:04X})", self.0, self.1)
    }
}

pub mod tags {
    use super::Tag;

    pub const META_GROUP_LENGTH: Tag = Tag(0x0002, 0x0000);
    pub const FILE_META_VERSION: Tag = Tag(0x0002, 0x0001);
    pub const MEDIA_STORAGE_SOP_CLASS: Tag = Tag(0x0002, 0x0002);
    pub const TRANSFER_SYNTAX_UID: Tag = Tag(0x0002, 0x0010);
    pub const PATIENT_ID: Tag = Tag(0x0010, 0x0020);
    pub const SLICE_THICKNESS: Tag = Tag(0x0018, 0x0050);
    pub const INSTANCE_NUMBER: Tag = Tag(0x0020, 0x0013);
    pub const SAMPLES_PER_PIXEL: Tag = Tag(0x0028, 0x0002);
    pub const NUMBER_OF_FRAMES: Tag = Tag(0x0028, 0x0008);
    pub const ROWS: Tag = Tag(0x0028, 0x0010);
    pub const COLUMNS: Tag = Tag(0x0028, 0x0011);
    pub const PIXEL_SPACING: Tag = Tag(0x0028, 0x0030);
    pub const BITS_ALLOCATED: Tag = Tag(0x0028, 0x0100);
    pub const BITS_STORED: Tag = Tag(0x0028, 0x0101);
    pub const HIGH_BIT: Tag = Tag(0x0028, 0x0102);
    pub const PIXEL_REPRESENTATION: Tag = Tag(0x0028, 0x0103);
    pub const RESCALE_INTERCEPT: Tag = Tag(0x0028, 0x1052);
    pub const RESCALE_SLOPE: Tag = Tag(0x0028, 0x1053);
    pub const PIXEL_DATA: Tag = Tag(0x7FE0, 0x0010);

    pub(super) const ITEM: Tag = Tag(0xFFFE, 0xE000);
    pub(super) const ITEM_DELIMITATION: Tag = Tag(0xFFFE, 0xE00D);
    pub(super) const SEQUENCE_DELIMITATION: Tag = Tag(0xFFFE, 0xE0DD);
}

const IMPLICIT_VR_LE: &str = "1.2.840.10008.1.2";
const EXPLICIT_VR_LE: &str = "1.2.840.10008.1.2.1";
const CT_IMAGE_STORAGE: &str = "1.2.840.10008.5.1.4.1.1.2";
const UNDEFINED_LENGTH: u32 = 0xFFFF_FFFF;

pub const DEFAULT_SLICE_THICKNESS_MM: f64 = 5.0;

/// Byte-level encoding of the dataset that follows the file meta group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferSyntax {
    ExplicitVrLittleEndian,
    ImplicitVrLittleEndian,
}

impl TransferSyntax {
    pub fn uid(self) -> &'static str {
        match self {
            TransferSyntax::ExplicitVrLittleEndian => EXPLICIT_VR_LE,
            TransferSyntax::ImplicitVrLittleEndian => IMPLICIT_VR_LE,
        }
    }

    fn from_uid(uid: &str) -> Result<Self> {
        match uid {
            EXPLICIT_VR_LE => Ok(TransferSyntax::ExplicitVrLittleEndian),
            IMPLICIT_VR_LE => Ok(TransferSyntax::ImplicitVrLittleEndian),
            other => Err(Error::Unsupported(format!("transfer syntax {other}"))),
        }
    }

    fn explicit(self) -> bool {
        self == TransferSyntax::ExplicitVrLittleEndian
    }
}

/// A parsed single-frame grayscale image object.
#[derive(Debug, Clone, PartialEq)]
pub struct DicomObject {
    /// Raw values of every top-level dataset element except pixel data.
    pub tags: BTreeMap<Tag, Vec<u8>>,
    pub rows: usize,
    pub cols: usize,
    pub bits_allocated: u16,
    /// 0 = unsigned, 1 = two's complement stored values.
    pub pixel_representation: u16,
    pub rescale_slope: f64,
    pub rescale_intercept: f64,
    pub slice_thickness_mm: f64,
    /// `(row spacing, column spacing)` in millimetres.
    pub pixel_spacing_mm: (f64, f64),
    pub patient_id: String,
    pub instance_number: i64,
    pub pixel_data: Vec<i32>,
}

/// Field values for building a CT object from scratch (fixtures, phantoms).
#[derive(Debug, Clone, PartialEq)]
pub struct CtFields {
    pub patient_id: String,
    pub instance_number: i64,
    pub rows: usize,
    pub cols: usize,
    pub bits_allocated: u16,
    pub pixel_representation: u16,
    pub rescale_slope: f64,
    pub rescale_intercept: f64,
    pub slice_thickness_mm: f64,
    pub pixel_spacing_mm: (f64, f64),
    pub pixel_data: Vec<i32>,
}

impl DicomObject {
    /// Builds an object whose raw tag map encodes `fields`, so that writing
    /// and re-reading it reproduces an equal object.
    pub fn from_fields(fields: CtFields) -> Self {
        let mut t = BTreeMap::new();
        let bits_stored = fields.bits_allocated;
        t.insert(tags::PATIENT_ID, pad_text(fields.patient_id.as_bytes(), b' '));
        t.insert(tags::SLICE_THICKNESS, encode_ds(&[fields.slice_thickness_mm]));
        t.insert(
            tags::INSTANCE_NUMBER,
            pad_text(fields.instance_number.to_string().as_bytes(), b' '),
        );
        t.insert(tags::SAMPLES_PER_PIXEL, 1u16.to_le_bytes().to_vec());
        t.insert(tags::ROWS, (fields.rows as u16).to_le_bytes().to_vec());
        t.insert(tags::COLUMNS, (fields.cols as u16).to_le_bytes().to_vec());
        t.insert(
            tags::PIXEL_SPACING,
            encode_ds(&[fields.pixel_spacing_mm.0, fields.pixel_spacing_mm.1]),
        );
        t.insert(tags::BITS_ALLOCATED, fields.bits_allocated.to_le_bytes().to_vec());
        t.insert(tags::BITS_STORED, bits_stored.to_le_bytes().to_vec());
        t.insert(tags::HIGH_BIT, (bits_stored - 1).to_le_bytes().to_vec());
        t.insert(
            tags::PIXEL_REPRESENTATION,
            fields.pixel_representation.to_le_bytes().to_vec(),
        );
        t.insert(tags::RESCALE_INTERCEPT, encode_ds(&[fields.rescale_intercept]));
        t.insert(tags::RESCALE_SLOPE, encode_ds(&[fields.rescale_slope]));
        DicomObject {
            tags: t,
            rows: fields.rows,
            cols: fields.cols,
            bits_allocated: fields.bits_allocated,
            pixel_representation: fields.pixel_representation,
            rescale_slope: fields.rescale_slope,
            rescale_intercept: fields.rescale_intercept,
            slice_thickness_mm: fields.slice_thickness_mm,
            pixel_spacing_mm: fields.pixel_spacing_mm,
            patient_id: fields.patient_id,
            instance_number: fields.instance_number,
            pixel_data: fields.pixel_data,
        }
    }

    /// Stored value mapped through the modality rescale.
    #[inline]
    pub fn hounsfield(&self, stored: i32) -> f64 {
        stored as f64 * self.rescale_slope + self.rescale_intercept
    }
}

/// Parses a complete part-10 file image.
pub fn parse_dicom(bytes: &[u8]) -> Result<DicomObject> {
    if bytes.len() < 132 || &bytes[128..132] != b"DICM" {
        return Err(Error::Format("missing DICM magic after 128-byte preamble".into()));
    }
    let mut reader = Reader {
        bytes,
        pos: 132,
        explicit: true,
    };

    let mut syntax_uid = None;
    while reader.remaining() >= 4 && reader.peek_u16()? == 0x0002 {
        let el = reader.element()?;
        if el.tag == tags::TRANSFER_SYNTAX_UID {
            if let Value::Bytes(v) = el.value {
                syntax_uid = Some(text(v));
            }
        }
    }
    let syntax_uid = syntax_uid.ok_or(Error::MissingTag(tags::TRANSFER_SYNTAX_UID))?;
    let syntax = TransferSyntax::from_uid(&syntax_uid)?;
    reader.explicit = syntax.explicit();

    let mut raw = BTreeMap::new();
    let mut pixel_bytes = None;
    while reader.remaining() > 0 {
        let el = reader.element()?;
        match el.value {
            Value::Bytes(v) if el.tag == tags::PIXEL_DATA => pixel_bytes = Some(v),
            Value::Bytes(v) => {
                raw.insert(el.tag, v.to_vec());
            }
            Value::Encapsulated => {
                return Err(Error::Unsupported("encapsulated (compressed) pixel data".into()))
            }
            Value::Sequence => {}
        }
    }

    let rows = required_us(&raw, tags::ROWS)? as usize;
    let cols = required_us(&raw, tags::COLUMNS)? as usize;
    let bits_allocated = required_us(&raw, tags::BITS_ALLOCATED)?;
    if bits_allocated != 8 && bits_allocated != 16 {
        return Err(Error::Unsupported(format!("BitsAllocated = {bits_allocated}")));
    }
    let patient_id = raw
        .get(&tags::PATIENT_ID)
        .map(|v| text(v))
        .ok_or(Error::MissingTag(tags::PATIENT_ID))?;
    let instance_number = raw
        .get(&tags::INSTANCE_NUMBER)
        .ok_or(Error::MissingTag(tags::INSTANCE_NUMBER))
        .and_then(|v| {
            let s = text(v);
            s.parse::<i64>()
                .map_err(|_| Error::Format(format!("InstanceNumber {s:?} is not an integer")))
        })?;
    let pixel_bytes = pixel_bytes.ok_or(Error::MissingTag(tags::PIXEL_DATA))?;

    if let Some(spp) = optional_us(&raw, tags::SAMPLES_PER_PIXEL)? {
        if spp != 1 {
            return Err(Error::Unsupported(format!("SamplesPerPixel = {spp}")));
        }
    }
    if let Some(v) = raw.get(&tags::NUMBER_OF_FRAMES) {
        let frames = text(v);
        if frames.parse::<i64>().map_or(true, |n| n > 1) {
            return Err(Error::Unsupported(format!("NumberOfFrames = {frames}")));
        }
    }

    let pixel_representation = optional_us(&raw, tags::PIXEL_REPRESENTATION)?.unwrap_or(0);
    let rescale_slope = optional_ds(&raw, tags::RESCALE_SLOPE)?.map_or(1.0, |v| v[0]);
    let rescale_intercept = optional_ds(&raw, tags::RESCALE_INTERCEPT)?.map_or(0.0, |v| v[0]);
    let slice_thickness_mm = match optional_ds(&raw, tags::SLICE_THICKNESS)? {
        Some(v) if v[0] > 0.0 => v[0],
        Some(v) => {
            return Err(Error::Format(format!("SliceThickness must be positive, got {}", v[0])))
        }
        None => {
            warn!("SliceThickness absent; assuming {DEFAULT_SLICE_THICKNESS_MM} mm");
            DEFAULT_SLICE_THICKNESS_MM
        }
    };
    let pixel_spacing_mm = match optional_ds(&raw, tags::PIXEL_SPACING)? {
        Some(v) if v.len() >= 2 => (v[0], v[1]),
        Some(_) => return Err(Error::Format("PixelSpacing needs two values".into())),
        None => (1.0, 1.0),
    };

    let pixel_data = decode_pixels(pixel_bytes, rows * cols, bits_allocated, pixel_representation)?;

    Ok(DicomObject {
        tags: raw,
        rows,
        cols,
        bits_allocated,
        pixel_representation,
        rescale_slope,
        rescale_intercept,
        slice_thickness_mm,
        pixel_spacing_mm,
        patient_id,
        instance_number,
        pixel_data,
    })
}

fn decode_pixels(bytes: &[u8], count: usize, bits: u16, repr: u16) -> Result<Vec<i32>> {
    let signed = repr == 1;
    match bits {
        8 => {
            // Odd-length 8-bit data carries one trailing pad byte.
            if bytes.len() != count && bytes.len() != count + (count & 1) {
                return Err(Error::Format(format!(
                    "pixel data holds {} bytes, expected {count}",
                    bytes.len()
                )));
            }
            Ok(bytes[..count]
                .iter()
                .map(|&b| if signed { b as i8 as i32 } else { b as i32 })
                .collect())
        }
        _ => {
            if bytes.len() != 2 * count {
                return Err(Error::Format(format!(
                    "pixel data holds {} bytes, expected {}",
                    bytes.len(),
                    2 * count
                )));
            }
            Ok(bytes
                .chunks_exact(2)
                .map(|c| {
                    let v = u16::from_le_bytes([c[0], c[1]]);
                    if signed {
                        v as i16 as i32
                    } else {
                        v as i32
                    }
                })
                .collect())
        }
    }
}

fn required_us(raw: &BTreeMap<Tag, Vec<u8>>, tag: Tag) -> Result<u16> {
    optional_us(raw, tag)?.ok_or(Error::MissingTag(tag))
}

fn optional_us(raw: &BTreeMap<Tag, Vec<u8>>, tag: Tag) -> Result<Option<u16>> {
    match raw.get(&tag) {
        None => Ok(None),
        Some(v) if v.len() >= 2 => Ok(Some(u16::from_le_bytes([v[0], v[1]]))),
        Some(_) => Err(Error::Format(format!("{tag} is shorter than a US value"))),
    }
}

fn optional_ds(raw: &BTreeMap<Tag, Vec<u8>>, tag: Tag) -> Result<Option<Vec<f64>>> {
    let Some(v) = raw.get(&tag) else {
        return Ok(None);
    };
    let s = text(v);
    s.split('\\')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("{tag} value {part:?} is not a decimal string")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn text(v: &[u8]) -> String {
    String::from_utf8_lossy(v)
        .trim_matches(|c: char| c == ' ' || c == '\0')
        .to_string()
}

enum Value<'a> {
    Bytes(&'a [u8]),
    Sequence,
    Encapsulated,
}

struct Element<'a> {
    tag: Tag,
    value: Value<'a>,
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    explicit: bool,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::Format(format!("truncated at byte {}", self.pos)));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn peek_u16(&self) -> Result<u16> {
        if self.remaining() < 2 {
            return Err(Error::Format(format!("truncated at byte {}", self.pos)));
        }
        Ok(u16::from_le_bytes([self.bytes[self.pos], self.bytes[self.pos + 1]]))
    }

    fn u16(&mut self) -> Result<u16> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn tag(&mut self) -> Result<Tag> {
        Ok(Tag(self.u16()?, self.u16()?))
    }

    /// Reads one element header and its value, skipping sequences.
    fn element(&mut self) -> Result<Element<'a>> {
        let tag = self.tag()?;
        // Item and delimiter tags never carry a VR.
        let (vr, len) = if tag.0 == 0xFFFE {
            (None, self.u32()?)
        } else if self.explicit || tag.0 == 0x0002 {
            let vr = self.take(2)?;
            let vr = [vr[0], vr[1]];
            let len = if has_long_length(&vr) {
                self.take(2)?;
                self.u32()?
            } else {
                self.u16()? as u32
            };
            (Some(vr), len)
        } else {
            (None, self.u32()?)
        };

        if len == UNDEFINED_LENGTH {
            if tag == tags::PIXEL_DATA {
                return Ok(Element {
                    tag,
                    value: Value::Encapsulated,
                });
            }
            // Undefined length only occurs on SQ (or UN holding a sequence).
            self.skip_undefined_sequence()?;
            return Ok(Element {
                tag,
                value: Value::Sequence,
            });
        }
        let value = self.take(len as usize)?;
        if vr == Some(*b"SQ") {
            return Ok(Element {
                tag,
                value: Value::Sequence,
            });
        }
        Ok(Element {
            tag,
            value: Value::Bytes(value),
        })
    }

    fn skip_undefined_sequence(&mut self) -> Result<()> {
        loop {
            let tag = self.tag()?;
            let len = self.u32()?;
            match tag {
                tags::SEQUENCE_DELIMITATION => return Ok(()),
                tags::ITEM if len == UNDEFINED_LENGTH => self.skip_undefined_item()?,
                tags::ITEM => {
                    self.take(len as usize)?;
                }
                other => {
                    return Err(Error::Format(format!("unexpected {other} inside sequence")))
                }
            }
        }
    }

    fn skip_undefined_item(&mut self) -> Result<()> {
        loop {
            if self.remaining() >= 4 {
                let group = self.peek_u16()?;
                let element = u16::from_le_bytes([self.bytes[self.pos + 2], self.bytes[self.pos + 3]]);
                if Tag(group, element) == tags::ITEM_DELIMITATION {
                    self.tag()?;
                    self.u32()?;
                    return Ok(());
                }
            }
            self.element()?;
        }
    }
}

fn has_long_length(vr: &[u8; 2]) -> bool {
    matches!(
        vr,
        b"OB" | b"OD" | b"OF" | b"OL" | b"OV" | b"OW" | b"SQ" | b"SV" | b"UC" | b"UN" | b"UR"
            | b"UT" | b"UV"
    )
}

/// Value representation used when writing explicit-VR files.
fn vr_for(tag: Tag, bits_allocated: u16) -> [u8; 2] {
    match tag {
        tags::META_GROUP_LENGTH => *b"UL",
        tags::FILE_META_VERSION => *b"OB",
        tags::MEDIA_STORAGE_SOP_CLASS | tags::TRANSFER_SYNTAX_UID => *b"UI",
        tags::PATIENT_ID => *b"LO",
        tags::SLICE_THICKNESS | tags::PIXEL_SPACING => *b"DS",
        tags::RESCALE_INTERCEPT | tags::RESCALE_SLOPE => *b"DS",
        tags::INSTANCE_NUMBER | tags::NUMBER_OF_FRAMES => *b"IS",
        tags::SAMPLES_PER_PIXEL
        | tags::ROWS
        | tags::COLUMNS
        | tags::BITS_ALLOCATED
        | tags::BITS_STORED
        | tags::HIGH_BIT
        | tags::PIXEL_REPRESENTATION => *b"US",
        tags::PIXEL_DATA if bits_allocated == 8 => *b"OB",
        tags::PIXEL_DATA => *b"OW",
        _ => *b"UN",
    }
}

fn pad_text(s: &[u8], pad: u8) -> Vec<u8> {
    let mut v = s.to_vec();
    if v.len() % 2 == 1 {
        v.push(pad);
    }
    v
}

/// Decimal-string encoding; each value is kept within the 16-byte DS limit.
fn encode_ds(values: &[f64]) -> Vec<u8> {
    let parts: Vec<String> = values
        .iter()
        .map(|&v| {
            let mut s = format!("{v}");
            let mut prec = 14usize;
            while s.len() > 16 && prec > 0 {
                s = format!("{v:.prec$}");
                prec -= 1;
            }
            s
        })
        .collect();
    pad_text(parts.join("\\").as_bytes(), b' ')
}

fn write_element(out: &mut Vec<u8>, tag: Tag, value: &[u8], explicit: bool, bits: u16) {
    out.extend_from_slice(&tag.0.to_le_bytes());
    out.extend_from_slice(&tag.1.to_le_bytes());
    if explicit || tag.0 == 0x0002 {
        let vr = vr_for(tag, bits);
        out.extend_from_slice(&vr);
        if has_long_length(&vr) {
            out.extend_from_slice(&[0, 0]);
            out.extend_from_slice(&(value.len() as u32).to_le_bytes());
        } else {
            out.extend_from_slice(&(value.len() as u16).to_le_bytes());
        }
    } else {
        out.extend_from_slice(&(value.len() as u32).to_le_bytes());
    }
    out.extend_from_slice(value);
}

/// Serializes `obj` as a part-10 file in the requested transfer syntax.
pub fn encode_dicom(obj: &DicomObject, syntax: TransferSyntax) -> Vec<u8> {
    let bits = obj.bits_allocated;
    let mut meta = Vec::new();
    write_element(&mut meta, tags::FILE_META_VERSION, &[0, 1], true, bits);
    write_element(
        &mut meta,
        tags::MEDIA_STORAGE_SOP_CLASS,
        &pad_text(CT_IMAGE_STORAGE.as_bytes(), 0),
        true,
        bits,
    );
    write_element(
        &mut meta,
        tags::TRANSFER_SYNTAX_UID,
        &pad_text(syntax.uid().as_bytes(), 0),
        true,
        bits,
    );

    let mut out = vec![0u8; 128];
    out.extend_from_slice(b"DICM");
    write_element(
        &mut out,
        tags::META_GROUP_LENGTH,
        &(meta.len() as u32).to_le_bytes(),
        true,
        bits,
    );
    out.extend_from_slice(&meta);

    let explicit = syntax.explicit();
    for (tag, value) in &obj.tags {
        write_element(&mut out, *tag, value, explicit, bits);
    }
    let pixels: Vec<u8> = if bits == 8 {
        pad_text(
            &obj.pixel_data.iter().map(|&v| v as u8).collect::<Vec<_>>(),
            0,
        )
    } else {
        obj.pixel_data
            .iter()
            .flat_map(|&v| (v as u16).to_le_bytes())
            .collect()
    };
    write_element(&mut out, tags::PIXEL_DATA, &pixels, explicit, bits);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> DicomObject {
        DicomObject::from_fields(CtFields {
            patient_id: "R0042".into(),
            instance_number: 7,
            rows: 2,
            cols: 2,
            bits_allocated: 16,
            pixel_representation: 0,
            rescale_slope: 1.0,
            rescale_intercept: -1024.0,
            slice_thickness_mm: 2.5,
            pixel_spacing_mm: (0.7, 0.7),
            pixel_data: vec![0, 100, 200, 300],
        })
    }

    #[test]
    fn explicit_fixture_round_trips() {
        let obj = fixture();
        let parsed = parse_dicom(&encode_dicom(&obj, TransferSyntax::ExplicitVrLittleEndian)).unwrap();
        assert_eq!(parsed, obj);
        assert_eq!(parsed.pixel_data, vec![0, 100, 200, 300]);
        assert_eq!((parsed.rows, parsed.cols, parsed.bits_allocated), (2, 2, 16));
    }

    #[test]
    fn implicit_fixture_matches_explicit() {
        let obj = fixture();
        let a = parse_dicom(&encode_dicom(&obj, TransferSyntax::ExplicitVrLittleEndian)).unwrap();
        let b = parse_dicom(&encode_dicom(&obj, TransferSyntax::ImplicitVrLittleEndian)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_magic_is_format_error() {
        let mut bytes = encode_dicom(&fixture(), TransferSyntax::ExplicitVrLittleEndian);
        bytes[128..132].copy_from_slice(b"XXXX");
        assert!(matches!(parse_dicom(&bytes), Err(Error::Format(_))));
    }

    #[test]
    fn missing_required_tags() {
        for tag in [tags::ROWS, tags::COLUMNS, tags::BITS_ALLOCATED, tags::PATIENT_ID, tags::INSTANCE_NUMBER] {
            let mut obj = fixture();
            obj.tags.remove(&tag);
            let bytes = encode_dicom(&obj, TransferSyntax::ExplicitVrLittleEndian);
            match parse_dicom(&bytes) {
                Err(Error::MissingTag(t)) => assert_eq!(t, tag),
                other => panic!("expected MissingTag({tag}), got {other:?}"),
            }
        }
    }

    #[test]
    fn optional_tags_take_defaults() {
        let mut obj = fixture();
        for tag in [tags::RESCALE_SLOPE, tags::RESCALE_INTERCEPT, tags::SLICE_THICKNESS, tags::PIXEL_SPACING] {
            obj.tags.remove(&tag);
        }
        let parsed = parse_dicom(&encode_dicom(&obj, TransferSyntax::ImplicitVrLittleEndian)).unwrap();
        assert_eq!(parsed.rescale_slope, 1.0);
        assert_eq!(parsed.rescale_intercept, 0.0);
        assert_eq!(parsed.slice_thickness_mm, 5.0);
        assert_eq!(parsed.pixel_spacing_mm, (1.0, 1.0));
    }

    #[test]
    fn compressed_syntax_is_unsupported() {
        let bytes = encode_dicom(&fixture(), TransferSyntax::ExplicitVrLittleEndian);
        let needle = EXPLICIT_VR_LE.as_bytes();
        let pos = bytes.windows(needle.len()).position(|w| w == needle).unwrap();
        // Same length as the explicit UID plus its pad: JPEG baseline.
        let jpeg = b"1.2.840.10008.1.2.4.50";
        let mut patched = bytes[..pos - 2].to_vec();
        patched.extend_from_slice(&(jpeg.len() as u16).to_le_bytes());
        patched.extend_from_slice(jpeg);
        patched.extend_from_slice(&bytes[pos + needle.len() + 1..]);
        assert!(matches!(parse_dicom(&patched), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sequences_are_skipped() {
        let obj = fixture();
        let bytes = encode_dicom(&obj, TransferSyntax::ExplicitVrLittleEndian);
        // Splice an undefined-length SQ with one undefined-length item before PatientID.
        let mut seq = Vec::new();
        seq.extend_from_slice(&0x0008u16.to_le_bytes());
        seq.extend_from_slice(&0x1140u16.to_le_bytes());
        seq.extend_from_slice(b"SQ\0\0");
        seq.extend_from_slice(&UNDEFINED_LENGTH.to_le_bytes());
        seq.extend_from_slice(&[0xFE, 0xFF, 0x00, 0xE0]);
        seq.extend_from_slice(&UNDEFINED_LENGTH.to_le_bytes());
        // (0008,1150) UI "1.2.3\0"
        seq.extend_from_slice(&[0x08, 0x00, 0x50, 0x11, b'U', b'I', 6, 0]);
        seq.extend_from_slice(b"1.2.3\0");
        seq.extend_from_slice(&[0xFE, 0xFF, 0x0D, 0xE0, 0, 0, 0, 0]);
        seq.extend_from_slice(&[0xFE, 0xFF, 0xDD, 0xE0, 0, 0, 0, 0]);
        let pid = [0x10u8, 0x00, 0x20, 0x00];
        let pos = bytes.windows(4).position(|w| w == pid).unwrap();
        let mut spliced = bytes[..pos].to_vec();
        spliced.extend_from_slice(&seq);
        spliced.extend_from_slice(&bytes[pos..]);
        assert_eq!(parse_dicom(&spliced).unwrap(), obj);
    }

    #[test]
    fn signed_eight_bit_pixels() {
        let obj = DicomObject::from_fields(CtFields {
            bits_allocated: 8,
            pixel_representation: 1,
            rows: 1,
            cols: 3,
            pixel_data: vec![-1, 0, 5],
            ..fixture_fields()
        });
        let parsed = parse_dicom(&encode_dicom(&obj, TransferSyntax::ExplicitVrLittleEndian)).unwrap();
        assert_eq!(parsed.pixel_data, vec![-1, 0, 5]);
    }

    fn fixture_fields() -> CtFields {
        CtFields {
            patient_id: "P".into(),
            instance_number: 1,
            rows: 2,
            cols: 2,
            bits_allocated: 16,
            pixel_representation: 0,
            rescale_slope: 1.0,
            rescale_intercept: 0.0,
            slice_thickness_mm: 5.0,
            pixel_spacing_mm: (1.0, 1.0),
            pixel_data: vec![0; 4],
        }
    }
}
