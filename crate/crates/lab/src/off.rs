//! ASCII OFF meshes: `OFF`, a `V F E` count line, vertex lines, then
//! `3 i j k` face lines. `#` starts a comment.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use isobound_core::TriMesh;

use crate::error::{LabError, Result};

fn off_err(line: usize, msg: impl Into<String>) -> LabError {
    LabError::Off { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| off_err(line, format!("bad number {tok:?}")))
}

pub fn parse_off(text: &str) -> Result<TriMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| off_err(1, "empty file"))?;
    let mut toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"OFF") {
        return Err(off_err(hline, "missing OFF header"));
    }
    toks.remove(0);
    let (cline, counts) = if toks.is_empty() {
        let (n, l) = lines.next().ok_or_else(|| off_err(hline, "missing counts"))?;
        (n, l.split_whitespace().collect::<Vec<_>>())
    } else {
        (hline, toks)
    };
    if counts.len() < 2 {
        return Err(off_err(cline, "expected vertex and face counts"));
    }
    let nv: usize = parse_num(counts[0], cline)?;
    let nf: usize = parse_num(counts[1], cline)?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines.next().ok_or_else(|| off_err(cline, format!("expected {nv} vertices")))?;
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() < 3 {
            return Err(off_err(n, "vertex needs three coordinates"));
        }
        vertices.push([parse_num(t[0], n)?, parse_num(t[1], n)?, parse_num(t[2], n)?]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (n, l) = lines.next().ok_or_else(|| off_err(cline, format!("expected {nf} faces")))?;
        let t: Vec<&str> = l.split_whitespace().collect();
        let k: usize = parse_num(t[0], n)?;
        if k != 3 {
            return Err(off_err(n, format!("only triangles are supported, got a {k}-gon")));
        }
        if t.len() < 4 {
            return Err(off_err(n, "face needs three indices"));
        }
        faces.push([parse_num(t[1], n)?, parse_num(t[2], n)?, parse_num(t[3], n)?]);
    }
    if let Some((n, _)) = lines.next() {
        return Err(off_err(n, "trailing data after faces"));
    }
    Ok(TriMesh::new(vertices, faces)?)
}

pub fn to_off(mesh: &TriMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "OFF\n{} {} {}", mesh.vertex_count(), mesh.faces().len(), mesh.edge_count());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{} {} {}", v[0], v[1], v[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(s, "3 {} {} {}", f[0], f[1], f[2]);
    }
    s
}

pub fn read_off(path: &Path) -> Result<TriMesh> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path.display().to_string(), e))?;
    parse_off(&text)
}

pub fn write_off(mesh: &TriMesh, path: &Path) -> Result<()> {
    fs::write(path, to_off(mesh)).map_err(|e| LabError::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TETRA: &str =
        "OFF\n# a tetrahedron\n4 4 6\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n";

    #[test]
    fn reads_a_tetrahedron() {
        let m = parse_off(TETRA).unwrap();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.edge_count(), 6);
        assert!(m.volume() > 0.0);
    }

    #[test]
    fn counts_may_share_the_header_line() {
        let inline = TETRA.replacen("OFF\n# a tetrahedron\n4 4 6", "OFF 4 4 6", 1);
        assert_eq!(parse_off(&inline).unwrap(), parse_off(TETRA).unwrap());
    }

    #[test]
    fn rejects_quads_and_truncation() {
        let quad = TETRA.replacen("3 0 1 2", "4 0 1 2 3", 1);
        assert!(matches!(parse_off(&quad), Err(LabError::Off { line: 8, .. })));
        let cut = &TETRA[..TETRA.len() - 8];
        assert!(parse_off(cut).is_err());
        assert!(matches!(parse_off("PLY\n"), Err(LabError::Off { line: 1, .. })));
    }
}
