//! CSV formats.
//!
//! Step functions: header `breakpoint,value`, one row per breakpoint, the value
//! being that of the cell starting there; the final row has an empty value.
//! Profiles: header `point,weight,value`.

use std::io::{Read, Write};

use super::grid::{SampleGrid, ScalarProfile};
use super::pcf::PiecewiseConstantFn;
use crate::error::{Error, Result};

pub fn write_pcf_csv<W: Write>(f: &PiecewiseConstantFn, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["breakpoint", "value"])?;
    for (b, v) in f.breakpoints().iter().zip(f.values()) {
        w.write_record([fmt(*b), fmt(*v)])?;
    }
    w.write_record([fmt(*f.breakpoints().last().unwrap()), String::new()])?;
    w.flush()?;
    Ok(())
}

pub fn read_pcf_csv<R: Read>(input: R) -> Result<PiecewiseConstantFn> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let mut bps = Vec::new();
    let mut vals = Vec::new();
    let mut closed = false;
    for rec in rdr.records() {
        let rec = rec?;
        if closed {
            return Err(Error::Parse("rows after the closing breakpoint".into()));
        }
        let b = parse(rec.get(0).unwrap_or(""))?;
        bps.push(b);
        match rec.get(1).unwrap_or("") {
            "" => closed = true,
            v => vals.push(parse(v)?),
        }
    }
    if !closed {
        return Err(Error::Parse("missing closing breakpoint row with empty value".into()));
    }
    PiecewiseConstantFn::new(bps, vals)
}

pub fn write_profile_csv<W: Write>(p: &ScalarProfile, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point", "weight", "value"])?;
    let g = p.grid();
    for ((x, wt), v) in g.points().iter().zip(g.weights()).zip(p.values()) {
        w.write_record([fmt(*x), fmt(*wt), fmt(*v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_profile_csv<R: Read>(input: R) -> Result<ScalarProfile> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let (mut pts, mut wts, mut vals) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        pts.push(parse(rec.get(0).unwrap_or(""))?);
        wts.push(parse(rec.get(1).unwrap_or(""))?);
        vals.push(parse(rec.get(2).unwrap_or(""))?);
    }
    ScalarProfile::new(SampleGrid::new(pts, wts)?, vals)
}

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn fmt(x: f64) -> String {
    format!("{x:?}")
}

fn parse(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pcf_csv_layout() {
        let f = PiecewiseConstantFn::new(vec![0.0, 0.5, 1.0], vec![1.0, -2.5]).unwrap();
        let mut buf = Vec::new();
        write_pcf_csv(&f, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "breakpoint,value\n0.0,1.0\n0.5,-2.5\n1.0,\n");
        assert_eq!(read_pcf_csv(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn pcf_csv_errors() {
        assert!(read_pcf_csv("breakpoint,value\n0,1\n1,2\n".as_bytes()).is_err());
        assert!(read_pcf_csv("breakpoint,value\n0,1\n1,\n2,\n".as_bytes()).is_err());
        assert_eq!(
            read_pcf_csv("breakpoint,value\n1,1\n0,\n".as_bytes()),
            Err(Error::NonMonotoneBreakpoints)
        );
    }

    proptest! {
        #[test]
        fn pcf_round_trip(cells in prop::collection::vec((0.001f64..10.0, -5.0f64..5.0), 1..20), start in -10.0f64..10.0) {
            let mut bps = vec![start];
            for (w, _) in &cells {
                bps.push(bps.last().unwrap() + w);
            }
            let vals = cells.iter().map(|c| c.1).collect();
            if let Ok(f) = PiecewiseConstantFn::new(bps, vals) {
                let mut buf = Vec::new();
                write_pcf_csv(&f, &mut buf).unwrap();
                prop_assert_eq!(read_pcf_csv(buf.as_slice()).unwrap(), f);
            }
        }

        #[test]
        fn profile_round_trip(vals in prop::collection::vec(-1e6f64..1e6, 2..50)) {
            let g = SampleGrid::uniform(-1.0, 3.0, vals.len()).unwrap();
            let p = ScalarProfile::new(g, vals).unwrap();
            let mut buf = Vec::new();
            write_profile_csv(&p, &mut buf).unwrap();
            prop_assert_eq!(read_profile_csv(buf.as_slice()).unwrap(), p);
        }
    }
}
