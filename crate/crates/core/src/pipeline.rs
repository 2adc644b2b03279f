//! Whole-image conversion and per-stage runs with on-disk artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::color_quant::{quantize_field, QuantizedColorField, CLASS_PALETTE};
use crate::config::PipelineConfig;
use crate::edge_detect::{
    detect_edges, export_edges, import_edges, threshold_edges, BinaryEdgeMap, EdgeStrengthMap,
};
use crate::error::{Error, Result};
use crate::image_io::{
    load_color_image, load_gray_image, load_mask, save_gray_image, save_indexed_png, save_mask,
    BitDepth, ColorImage, GrayImage,
};
use crate::layout::{compose_page, compose_tactile, make_thumbnail, TactileImage, TactilePage};
use crate::line_render::{compute_gap_mask, render_lines, GapMask, LineLayer};
use crate::texture_synth::{compute_density, stamp_texture, DensityField, TextureLayer};

pub const EDGES_FILE: &str = "edges.pgm";
pub const LINES_FILE: &str = "lines.png";
pub const CLASSES_FILE: &str = "classes.png";
pub const DENSITY_FILE: &str = "density.pgm";
pub const TEXTURES_FILE: &str = "textures.png";
pub const PAGE_FILE: &str = "page.png";
pub const PAGE_PGM_FILE: &str = "page.pgm";
pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Edges,
    Lines,
    Quantize,
    Density,
    Textures,
    Page,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Edges,
        Stage::Lines,
        Stage::Quantize,
        Stage::Density,
        Stage::Textures,
        Stage::Page,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Edges => "edges",
            Stage::Lines => "lines",
            Stage::Quantize => "quantize",
            Stage::Density => "density",
            Stage::Textures => "textures",
            Stage::Page => "page",
        }
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::UnknownStage(s.to_string()))
    }
}

/// Command-line switches that change what a run does.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvertFlags {
    /// Stop after writing the edge map.
    pub edges_only: bool,
    /// Use this edge map instead of running detection.
    pub edges_in: Option<PathBuf>,
    /// Overrides `fringe_enabled`.
    pub fringe: Option<bool>,
    /// Overrides `dpi`.
    pub dpi: Option<f64>,
    /// Run only this stage.
    pub stage: Option<Stage>,
}

impl ConvertFlags {
    /// The config with flag overrides applied and validated.
    pub fn apply(&self, cfg: &PipelineConfig) -> Result<PipelineConfig> {
        let mut cfg = cfg.clone();
        if let Some(f) = self.fringe {
            cfg.fringe_enabled = f;
        }
        if let Some(dpi) = self.dpi {
            cfg.dpi = dpi;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// What a run read, wrote and how long each stage took.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub input: PathBuf,
    pub config: PipelineConfig,
    /// `(artifact name, path)` in the order written.
    pub artifacts: Vec<(String, PathBuf)>,
    /// `(stage, milliseconds)` in the order run.
    pub timings: Vec<(String, f64)>,
}

impl RunManifest {
    fn new(input: &Path, config: &PipelineConfig) -> Self {
        Self {
            input: input.to_path_buf(),
            config: config.clone(),
            artifacts: Vec::new(),
            timings: Vec::new(),
        }
    }

    fn record(&mut self, name: &str, path: PathBuf) {
        self.artifacts.retain(|(n, _)| n != name);
        self.artifacts.push((name.to_string(), path));
    }

    pub fn artifact(&self, name: &str) -> Option<&Path> {
        self.artifacts.iter().find(|(n, _)| n == name).map(|(_, p)| p.as_path())
    }

    /// Flat `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input={}", self.input.display());
        for (key, value) in self.config.entries() {
            let _ = writeln!(out, "config.{key}={value}");
        }
        for (name, path) in &self.artifacts {
            let _ = writeln!(out, "artifact.{name}={}", path.display());
        }
        for (stage, ms) in &self.timings {
            let _ = writeln!(out, "time_ms.{stage}={ms:.3}");
        }
        out
    }

    fn write(&mut self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join(MANIFEST_FILE);
        self.record("manifest", path.clone());
        std::fs::write(&path, self.to_text()).map_err(|e| Error::io(&path, e))
    }
}

/// Every intermediate raster of one conversion.
#[derive(Debug, Clone)]
pub struct Conversion {
    pub edges: EdgeStrengthMap,
    pub binary: BinaryEdgeMap,
    pub lines: LineLayer,
    pub gap: GapMask,
    pub field: QuantizedColorField,
    pub density: DensityField,
    pub textures: TextureLayer,
    pub tactile: TactileImage,
    pub thumbnail: LineLayer,
    pub page: TactilePage,
}

/// Times a stage and tags its errors with the stage name.
struct Clock {
    timings: Vec<(String, f64)>,
}

impl Clock {
    fn run<T>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f().map_err(|e| e.in_stage(stage))?;
        self.timings.push((stage.to_string(), start.elapsed().as_secs_f64() * 1e3));
        Ok(out)
    }
}

/// Detected edges as stored on disk.
fn edges_for(img: &ColorImage, cfg: &PipelineConfig) -> EdgeStrengthMap {
    detect_edges(img, cfg).quantized_16()
}

fn convert_timed(
    img: &ColorImage,
    edges: Option<EdgeStrengthMap>,
    cfg: &PipelineConfig,
    clock: &mut Clock,
) -> Result<Conversion> {
    let edges = match edges {
        Some(e) => {
            img.ensure_same_size(e.grid())?;
            e
        }
        None => clock.run("edges", || Ok(edges_for(img, cfg)))?,
    };
    let (binary, lines, gap) = clock.run("lines", || {
        let binary = threshold_edges(&edges, cfg.edge_threshold);
        let lines = render_lines(&edges, cfg);
        let gap = compute_gap_mask(&lines, cfg.gap_width);
        Ok((binary, lines, gap))
    })?;
    let field = clock.run("quantize", || Ok(quantize_field(img, cfg)))?;
    let density = clock.run("density", || Ok(compute_density(&binary, cfg)))?;
    let textures = clock.run("textures", || stamp_texture(&field, &density, &gap, cfg))?;
    let (tactile, thumbnail, page) = clock.run("page", || {
        let tactile = compose_tactile(&lines, &textures)?;
        let thumbnail = make_thumbnail(&lines, cfg.thumbnail_scale)?;
        let page = compose_page(tactile.grid(), thumbnail.grid(), cfg)?;
        Ok((tactile, thumbnail, page))
    })?;
    Ok(Conversion { edges, binary, lines, gap, field, density, textures, tactile, thumbnail, page })
}

/// Converts an in-memory image. With `edges` given, detection is skipped and
/// those strengths are used as they are.
pub fn convert_image(
    img: &ColorImage,
    edges: Option<EdgeStrengthMap>,
    cfg: &PipelineConfig,
) -> Result<Conversion> {
    convert_timed(img, edges, cfg, &mut Clock { timings: Vec::new() })
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Runs the conversion on a file and writes every artifact into `out_dir`.
/// Returns the page, or `None` when the run stopped early.
pub fn run_convert(
    input: &Path,
    cfg: &PipelineConfig,
    out_dir: &Path,
    flags: &ConvertFlags,
) -> Result<(Option<TactilePage>, RunManifest)> {
    let cfg = flags.apply(cfg)?;
    create_dir(out_dir)?;
    if let Some(stage) = flags.stage {
        return run_stage(stage, Some(input), &cfg, out_dir).map(|m| (None, m));
    }

    let mut manifest = RunManifest::new(input, &cfg);
    let mut clock = Clock { timings: Vec::new() };
    let img = clock.run("load", || load_color_image(input))?;
    let imported = match &flags.edges_in {
        Some(path) => Some(clock.run("edges", || {
            let (w, h) = img.dimensions();
            import_edges(path, w, h)
        })?),
        None => None,
    };
    let out = |name: &str| out_dir.join(name);

    if flags.edges_only {
        let edges = match imported {
            Some(e) => e,
            None => clock.run("edges", || Ok(edges_for(&img, &cfg)))?,
        };
        clock.run("write", || export_edges(&edges, out(EDGES_FILE)))?;
        manifest.record("edges", out(EDGES_FILE));
        manifest.timings = clock.timings;
        manifest.write(out_dir)?;
        return Ok((None, manifest));
    }

    let conv = convert_timed(&img, imported, &cfg, &mut clock)?;
    clock.run("write", || {
        let dpi = Some(cfg.dpi);
        export_edges(&conv.edges, out(EDGES_FILE))?;
        save_mask(&conv.lines, out(LINES_FILE), dpi)?;
        save_indexed_png(&conv.field.class_indices(), &CLASS_PALETTE, out(CLASSES_FILE))?;
        save_density(&conv.density, &out(DENSITY_FILE))?;
        save_mask(&conv.textures, out(TEXTURES_FILE), dpi)?;
        save_mask(&conv.page.ink, out(PAGE_FILE), dpi)?;
        save_mask(&conv.page.ink, out(PAGE_PGM_FILE), None)
    })?;
    for (name, file) in [
        ("edges", EDGES_FILE),
        ("lines", LINES_FILE),
        ("classes", CLASSES_FILE),
        ("density", DENSITY_FILE),
        ("textures", TEXTURES_FILE),
        ("page", PAGE_FILE),
        ("page_pgm", PAGE_PGM_FILE),
    ] {
        manifest.record(name, out(file));
    }
    manifest.timings = clock.timings;
    manifest.write(out_dir)?;
    Ok((Some(conv.page), manifest))
}

fn save_density(density: &DensityField, path: &Path) -> Result<()> {
    save_gray_image(&GrayImage::from_grid_clamped(density.grid().clone()), path, BitDepth::Eight)
}

fn need(stage: Stage, path: PathBuf) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(Error::MissingArtifact { stage: stage.name().to_string(), needed: path })
    }
}

fn need_input(stage: Stage, input: Option<&Path>) -> Result<&Path> {
    input.ok_or_else(|| Error::Invalid(format!("stage `{}` needs an input image", stage.name())))
}

fn load_edges_artifact(stage: Stage, out_dir: &Path) -> Result<EdgeStrengthMap> {
    let path = need(stage, out_dir.join(EDGES_FILE))?;
    EdgeStrengthMap::new(load_gray_image(path)?.into_grid())
}

/// Runs one stage, reading upstream artifacts from `out_dir` and writing
/// only that stage's output there.
pub fn run_stage(
    stage: Stage,
    input: Option<&Path>,
    cfg: &PipelineConfig,
    out_dir: &Path,
) -> Result<RunManifest> {
    create_dir(out_dir)?;
    let mut manifest = RunManifest::new(input.unwrap_or(Path::new("")), cfg);
    let out = |name: &str| out_dir.join(name);
    let name = stage.name();
    let start = Instant::now();
    let written: Vec<(&str, &str)> = (|| -> Result<Vec<(&str, &str)>> {
        let dpi = Some(cfg.dpi);
        match stage {
            Stage::Edges => {
                let img = load_color_image(need_input(stage, input)?)?;
                export_edges(&edges_for(&img, cfg), out(EDGES_FILE))?;
                Ok(vec![("edges", EDGES_FILE)])
            }
            Stage::Lines => {
                let edges = load_edges_artifact(stage, out_dir)?;
                save_mask(&render_lines(&edges, cfg), out(LINES_FILE), dpi)?;
                Ok(vec![("lines", LINES_FILE)])
            }
            Stage::Quantize => {
                let img = load_color_image(need_input(stage, input)?)?;
                let field = quantize_field(&img, cfg);
                save_indexed_png(&field.class_indices(), &CLASS_PALETTE, out(CLASSES_FILE))?;
                Ok(vec![("classes", CLASSES_FILE)])
            }
            Stage::Density => {
                let edges = load_edges_artifact(stage, out_dir)?;
                let density = compute_density(&threshold_edges(&edges, cfg.edge_threshold), cfg);
                save_density(&density, &out(DENSITY_FILE))?;
                Ok(vec![("density", DENSITY_FILE)])
            }
            Stage::Textures => {
                let img = load_color_image(need_input(stage, input)?)?;
                let edges = load_edges_artifact(stage, out_dir)?;
                img.ensure_same_size(edges.grid())?;
                let lines = render_lines(&edges, cfg);
                let gap = compute_gap_mask(&lines, cfg.gap_width);
                let density = compute_density(&threshold_edges(&edges, cfg.edge_threshold), cfg);
                let field = quantize_field(&img, cfg);
                let textures = stamp_texture(&field, &density, &gap, cfg)?;
                save_mask(&textures, out(TEXTURES_FILE), dpi)?;
                Ok(vec![("textures", TEXTURES_FILE)])
            }
            Stage::Page => {
                let lines = LineLayer::from_grid(load_mask(need(stage, out(LINES_FILE))?)?);
                let textures = TextureLayer::from_grid(load_mask(need(stage, out(TEXTURES_FILE))?)?);
                let tactile = compose_tactile(&lines, &textures)?;
                let thumb = make_thumbnail(&lines, cfg.thumbnail_scale)?;
                let page = compose_page(tactile.grid(), thumb.grid(), cfg)?;
                save_mask(&page.ink, out(PAGE_FILE), dpi)?;
                save_mask(&page.ink, out(PAGE_PGM_FILE), None)?;
                Ok(vec![("page", PAGE_FILE), ("page_pgm", PAGE_PGM_FILE)])
            }
        }
    })()
    .map_err(|e| e.in_stage(name))?;
    manifest.timings.push((name.to_string(), start.elapsed().as_secs_f64() * 1e3));
    for (key, file) in written {
        manifest.record(key, out(file));
    }
    manifest.write(out_dir)?;
    Ok(manifest)
}
