//! Hand-assembled DICOM byte streams, written without the crate's encoder.

#![allow(dead_code)]

pub const EXPLICIT_LE: &str = "1.2.840.10008.1.2.1";
pub const IMPLICIT_LE: &str = "1.2.840.10008.1.2";

fn pad(mut v: Vec<u8>, with: u8) -> Vec<u8> {
    if v.len() % 2 == 1 {
        v.push(with);
    }
    v
}

fn explicit(out: &mut Vec<u8>, group: u16, elem: u16, vr: &[u8; 2], value: &[u8]) {
    out.extend_from_slice(&group.to_le_bytes());
    out.extend_from_slice(&elem.to_le_bytes());
    out.extend_from_slice(vr);
    if matches!(vr, b"OB" | b"OW" | b"SQ" | b"UN" | b"UT") {
        out.extend_from_slice(&[0, 0]);
        out.extend_from_slice(&(value.len() as u32).to_le_bytes());
    } else {
        out.extend_from_slice(&(value.len() as u16).to_le_bytes());
    }
    out.extend_from_slice(value);
}

fn implicit(out: &mut Vec<u8>, group: u16, elem: u16, value: &[u8]) {
    out.extend_from_slice(&group.to_le_bytes());
    out.extend_from_slice(&elem.to_le_bytes());
    out.extend_from_slice(&(value.len() as u32).to_le_bytes());
    out.extend_from_slice(value);
}

/// Dataset of a 3x4 signed 16-bit CT slice.
pub struct Fixture {
    pub patient_id: &'static str,
    pub instance: i64,
    pub rows: u16,
    pub cols: u16,
    pub pixels: Vec<i16>,
    pub include_rows: bool,
    pub include_patient: bool,
}

impl Default for Fixture {
    fn default() -> Self {
        Self {
            patient_id: "LUNG-042",
            instance: 17,
            rows: 3,
            cols: 4,
            pixels: vec![-1024, -1000, -500, 0, 40, 100, 200, 400, -2000, 1500, 3000, -1],
            include_rows: true,
            include_patient: true,
        }
    }
}

impl Fixture {
    fn elements(&self) -> Vec<(u16, u16, [u8; 2], Vec<u8>)> {
        let text = |s: &str, p: u8| pad(s.as_bytes().to_vec(), p);
        let us = |v: u16| v.to_le_bytes().to_vec();
        let mut els = Vec::new();
        if self.include_patient {
            els.push((0x0010, 0x0020, *b"LO", text(self.patient_id, b' ')));
        }
        els.push((0x0018, 0x0050, *b"DS", text("2.5", b' ')));
        els.push((0x0020, 0x0013, *b"IS", text(&self.instance.to_string(), b' ')));
        els.push((0x0028, 0x0002, *b"US", us(1)));
        if self.include_rows {
            els.push((0x0028, 0x0010, *b"US", us(self.rows)));
        }
        els.push((0x0028, 0x0011, *b"US", us(self.cols)));
        els.push((0x0028, 0x0030, *b"DS", text("0.7\\0.8", b' ')));
        els.push((0x0028, 0x0100, *b"US", us(16)));
        els.push((0x0028, 0x0101, *b"US", us(16)));
        els.push((0x0028, 0x0102, *b"US", us(15)));
        els.push((0x0028, 0x0103, *b"US", us(1)));
        els.push((0x0028, 0x1052, *b"DS", text("-1024", b' ')));
        els.push((0x0028, 0x1053, *b"DS", text("1", b' ')));
        let px: Vec<u8> = self.pixels.iter().flat_map(|v| v.to_le_bytes()).collect();
        els.push((0x7FE0, 0x0010, *b"OW", px));
        els
    }

    pub fn bytes(&self, syntax: &str) -> Vec<u8> {
        let mut out = vec![0u8; 128];
        out.extend_from_slice(b"DICM");
        let mut meta = Vec::new();
        explicit(&mut meta, 0x0002, 0x0001, b"OB", &[0, 1]);
        explicit(&mut meta, 0x0002, 0x0010, b"UI", &pad(syntax.as_bytes().to_vec(), 0));
        explicit(&mut out, 0x0002, 0x0000, b"UL", &(meta.len() as u32).to_le_bytes());
        out.extend_from_slice(&meta);
        for (g, e, vr, v) in self.elements() {
            if syntax == IMPLICIT_LE {
                implicit(&mut out, g, e, &v);
            } else {
                explicit(&mut out, g, e, &vr, &v);
            }
        }
        out
    }
}
