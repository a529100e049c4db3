//! Point-level instance files: a `# spec=` comment line followed by one CSV
//! row per point, `kind,index,planted,v0,...`. `x` rows carry the planted
//! partner; `y` rows leave it empty.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use ndarray::Array2;
use planted_core::model::{read_instance, Instance, InstanceSpec, Permutation};

use crate::output::csv_table;

const SPEC_PREFIX: &str = "# spec=";

pub fn points_csv(inst: &Instance) -> Result<Vec<u8>> {
    let d = inst.d();
    let mut header = vec!["kind".to_string(), "index".into(), "planted".into()];
    header.extend((0..d).map(|k| format!("v{k}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let row = |kind: &str, i: usize, planted: String, coords: ndarray::ArrayView1<f64>| {
        let mut r = vec![kind.to_string(), i.to_string(), planted];
        r.extend(coords.iter().map(|v| v.to_string()));
        r
    };
    let rows = (0..inst.n())
        .map(|i| row("x", i, inst.planted.apply(i).to_string(), inst.x.row(i)))
        .chain((0..inst.n()).map(|j| row("y", j, String::new(), inst.y.row(j))));
    let mut out = format!("{SPEC_PREFIX}{}\n", serde_json::to_string(&inst.spec)?).into_bytes();
    out.extend(csv_table(&header, rows)?);
    Ok(out)
}

pub fn read_points_csv(text: &str) -> Result<Instance> {
    let (first, body) = text
        .split_once('\n')
        .ok_or_else(|| anyhow!("empty points file"))?;
    let spec_json = first
        .strip_prefix(SPEC_PREFIX)
        .ok_or_else(|| anyhow!("points file must start with '{SPEC_PREFIX}'"))?;
    let spec: InstanceSpec = serde_json::from_str(spec_json)?;
    spec.validate()?;
    let (n, d) = (spec.n, spec.d);
    let mut x = Array2::zeros((n, d));
    let mut y = Array2::zeros((n, d));
    let mut planted = vec![usize::MAX; n];
    let mut seen = (vec![false; n], vec![false; n]);
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 3 + d {
            bail!(
                "row {} has {} fields, expected {}",
                line + 1,
                rec.len(),
                3 + d
            );
        }
        let i: usize = rec[1]
            .parse()
            .with_context(|| format!("row {}", line + 1))?;
        if i >= n {
            bail!("row {}: index {i} out of range", line + 1);
        }
        let coords = rec
            .iter()
            .skip(3)
            .map(|v| v.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()?;
        match &rec[0] {
            "x" => {
                planted[i] = rec[2].parse()?;
                x.row_mut(i).assign(&ndarray::ArrayView1::from(&coords));
                seen.0[i] = true;
            }
            "y" => {
                y.row_mut(i).assign(&ndarray::ArrayView1::from(&coords));
                seen.1[i] = true;
            }
            other => bail!("row {}: unknown kind '{other}'", line + 1),
        }
    }
    if seen.0.iter().chain(&seen.1).any(|s| !s) {
        bail!("points file is missing rows");
    }
    let planted = Permutation::new(planted).map_err(|e| anyhow!("planted column: {e}"))?;
    let mut noise = Array2::zeros((n, d));
    for i in 0..n {
        let z = &y.row(planted.apply(i)) - &x.row(i);
        noise.row_mut(i).assign(&z);
    }
    Ok(Instance {
        spec,
        x,
        y,
        noise,
        planted,
    })
}

/// Loads by extension: `.json` parameters are regenerated, `.csv` points
/// are read as is, anything else is taken as a binary dump.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let ctx = || format!("reading {}", path.display());
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => {
            let spec: InstanceSpec =
                serde_json::from_str(&std::fs::read_to_string(path).with_context(ctx)?)?;
            Ok(spec.generate()?)
        }
        Some("csv") => read_points_csv(&std::fs::read_to_string(path).with_context(ctx)?),
        _ => Ok(read_instance(std::fs::File::open(path).with_context(ctx)?)?),
    }
}
