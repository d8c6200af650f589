//! Sweeps over `(n, k)`: one record per canonical affine class of
//! `k`-subsets, a summary line per `(n, k)`, streamed as JSONL.

use std::collections::{BTreeSet, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auto::find_isomorphism;
use crate::bicyclic::{base_from_catalog, bicyclic_subgroups};
use crate::error::{Error, Result};
use crate::haar::{build_haar, HaarGraph};
use crate::zn::{self, ZnSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Definitional,
    Structural,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definitional" => Ok(Method::Definitional),
            "structural" => Ok(Method::Structural),
            "both" => Ok(Method::Both),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub modulus: u32,
    pub elems: Vec<u32>,
    pub connected: bool,
    /// `None` for disconnected sets and when the structural test ran out of
    /// budget.
    pub bci: Option<bool>,
    pub method: Method,
    /// Conjugacy classes of bicyclic subgroups, when computed.
    pub classes: Option<usize>,
    pub partner: Option<Vec<u32>>,
    pub timing_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub summary: bool,
    pub modulus: u32,
    pub k: usize,
    pub classes: usize,
    pub connected: usize,
    pub non_bci: usize,
    pub has_non_bci: bool,
    pub errors: usize,
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub moduli: Vec<u32>,
    pub sizes: Vec<usize>,
    pub method: Method,
    pub cap: u128,
}

/// Closed walks from `0⁺` of lengths 2, 4, …, 10. Haar graphs are
/// vertex-transitive, so this is an isomorphism invariant.
fn walk_invariant(g: &HaarGraph) -> [u64; 5] {
    let v = g.vertex_count();
    let mut cur = vec![0u64; v];
    cur[0] = 1;
    let mut out = [0u64; 5];
    for step in 1..=10 {
        let mut next = vec![0u64; v];
        for (p, &w) in cur.iter().enumerate() {
            if w != 0 {
                for &q in g.neighbors(p as u32) {
                    next[q as usize] = next[q as usize].wrapping_add(w);
                }
            }
        }
        cur = next;
        if step % 2 == 0 {
            out[step / 2 - 1] = cur[0];
        }
    }
    out
}

/// Isomorphism classes of the given Haar graphs, as a label per graph: the
/// index of the first graph of its class.
pub fn isomorphism_labels(graphs: &[HaarGraph]) -> Vec<usize> {
    let invariants: Vec<[u64; 5]> = graphs.par_iter().map(walk_invariant).collect();
    let mut reps: HashMap<[u64; 5], Vec<usize>> = HashMap::new();
    let mut labels = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        let bucket = reps.entry(invariants[i]).or_default();
        let hit = bucket
            .par_iter()
            .position_first(|&r| find_isomorphism(&graphs[r], g).is_some());
        match hit {
            Some(j) => labels.push(bucket[j]),
            None => {
                bucket.push(i);
                labels.push(i);
            }
        }
    }
    labels
}

struct Structural {
    bci: bool,
    classes: usize,
    partner: Option<ZnSet>,
}

fn structural(g: &HaarGraph, cap: u128) -> Result<Structural> {
    let catalog = bicyclic_subgroups(g, cap)?;
    let own = zn::canonical_affine_form(g.connection()).0;
    let partner = base_from_catalog(g, &catalog)
        .into_iter()
        .map(|e| zn::canonical_affine_form(&e.connection).0)
        .filter(|t| *t != own)
        .min();
    Ok(Structural {
        bci: catalog.class_count() == 1,
        classes: catalog.class_count(),
        partner,
    })
}

/// Records for every canonical affine class of `k`-subsets of `Z_n`, in
/// ascending order of the canonical set.
pub fn census_block(n: u32, k: usize, method: Method, cap: u128) -> Result<(Vec<CensusRecord>, CensusSummary)> {
    zn::check_modulus(n)?;
    if k == 0 || k as u32 > n {
        return Err(Error::Precondition(format!("k = {k} is out of range for n = {n}")));
    }
    let sets = zn::affine_classes(n, k);
    let graphs: Vec<HaarGraph> = sets.iter().map(build_haar).collect::<Result<_>>()?;
    let connected: Vec<usize> = (0..sets.len()).filter(|&i| graphs[i].is_connected()).collect();

    let mut definitional: HashMap<usize, (bool, Option<ZnSet>, u64)> = HashMap::new();
    if method != Method::Structural {
        let start = Instant::now();
        let conn_graphs: Vec<HaarGraph> = connected.iter().map(|&i| graphs[i].clone()).collect();
        let labels = isomorphism_labels(&conn_graphs);
        let share = start.elapsed().as_millis() as u64 / connected.len().max(1) as u64;
        let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
        for (j, &l) in labels.iter().enumerate() {
            members.entry(l).or_default().push(connected[j]);
        }
        for (j, &l) in labels.iter().enumerate() {
            let i = connected[j];
            let partner = members[&l].iter().find(|&&o| o != i).map(|&o| sets[o].clone());
            definitional.insert(i, (partner.is_none(), partner, share));
        }
    }

    let records: Vec<CensusRecord> = (0..sets.len())
        .into_par_iter()
        .map(|i| {
            let mut rec = CensusRecord {
                modulus: n,
                elems: sets[i].elems().to_vec(),
                connected: graphs[i].is_connected(),
                bci: None,
                method,
                classes: None,
                partner: None,
                timing_ms: 0,
                error: None,
            };
            if !rec.connected {
                return rec;
            }
            let start = Instant::now();
            let def = definitional.get(&i).cloned();
            let st = (method != Method::Definitional).then(|| structural(&graphs[i], cap));
            rec.timing_ms = start.elapsed().as_millis() as u64 + def.as_ref().map_or(0, |d| d.2);
            match (def, st) {
                (Some((bci, partner, _)), None) => {
                    rec.bci = Some(bci);
                    rec.partner = partner.map(|p| p.elems().to_vec());
                }
                (None, Some(Ok(s))) => {
                    rec.bci = Some(s.bci);
                    rec.classes = Some(s.classes);
                    rec.partner = s.partner.map(|p| p.elems().to_vec());
                }
                (Some((bci, partner, _)), Some(Ok(s))) => {
                    rec.classes = Some(s.classes);
                    if bci == s.bci {
                        rec.bci = Some(bci);
                        rec.partner = partner.map(|p| p.elems().to_vec());
                    } else {
                        rec.error = Some(format!("methods disagree: definitional {bci}, structural {}", s.bci));
                    }
                }
                (def, Some(Err(e))) => {
                    rec.bci = def.as_ref().map(|d| d.0);
                    rec.partner = def.and_then(|d| d.1).map(|p| p.elems().to_vec());
                    rec.error = Some(e.to_string());
                }
                (None, None) => unreachable!("at least one method runs"),
            }
            rec
        })
        .collect();

    let summary = CensusSummary {
        summary: true,
        modulus: n,
        k,
        classes: records.len(),
        connected: records.iter().filter(|r| r.connected).count(),
        non_bci: records.iter().filter(|r| r.bci == Some(false)).count(),
        has_non_bci: records.iter().any(|r| r.bci == Some(false)),
        errors: records.iter().filter(|r| r.error.is_some()).count(),
    };
    Ok((records, summary))
}

/// Runs the sweep, writing JSONL to `out`. `on_summary` sees each finished
/// `(n, k)` block.
pub fn run_census<W: Write>(
    config: &CensusConfig,
    out: &mut W,
    skip: &BTreeSet<(u32, usize)>,
    mut on_summary: impl FnMut(&CensusSummary),
) -> Result<Vec<CensusSummary>> {
    let mut summaries = Vec::new();
    for &n in &config.moduli {
        for &k in &config.sizes {
            if skip.contains(&(n, k)) || k as u32 > n {
                continue;
            }
            let (records, summary) = census_block(n, k, config.method, config.cap)?;
            for r in &records {
                writeln!(out, "{}", serde_json::to_string(r).expect("serializable")).map_err(io_err)?;
            }
            writeln!(out, "{}", serde_json::to_string(&summary).expect("serializable")).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            on_summary(&summary);
            summaries.push(summary);
        }
    }
    Ok(summaries)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse(format!("i/o: {e}"))
}

/// Cuts an interrupted census file back to its last summary line and
/// returns the `(n, k)` blocks it already holds.
pub fn prepare_resume(path: &Path) -> Result<BTreeSet<(u32, usize)>> {
    let mut done = BTreeSet::new();
    let Ok(file) = File::open(path) else {
        return Ok(done);
    };
    let mut keep = 0u64;
    let mut offset = 0u64;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    loop {
        line.clear();
        let read = reader.read_line(&mut line).map_err(io_err)?;
        if read == 0 {
            break;
        }
        offset += read as u64;
        if !line.ends_with('\n') {
            break;
        }
        if let Ok(s) = serde_json::from_str::<CensusSummary>(&line) {
            if s.summary {
                done.insert((s.modulus, s.k));
                keep = offset;
            }
        }
    }
    let file = OpenOptions::new().write(true).open(path).map_err(io_err)?;
    file.set_len(keep).map_err(io_err)?;
    Ok(done)
}

/// [`run_census`] into a file, optionally continuing a previous run.
pub fn census_to_path(
    config: &CensusConfig,
    path: &Path,
    resume: bool,
    on_summary: impl FnMut(&CensusSummary),
) -> Result<Vec<CensusSummary>> {
    let skip = if resume { prepare_resume(path)? } else { BTreeSet::new() };
    let mut file = OpenOptions::new()
        .create(true)
        .write(true)
        .truncate(!resume)
        .open(path)
        .map_err(io_err)?;
    file.seek(SeekFrom::End(0)).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    run_census(config, &mut out, &skip, on_summary)
}
