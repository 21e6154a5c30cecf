//! Runs suites of checks, building each shared stage once.

use std::str::FromStr;
use std::time::Instant;

use super::checks::{self, InvolutionCensus};
use super::geometry::{FixedComplex, PointResidue};
use super::{instantiate, local_normalizers, sylow2, Co3Config, Co3Context, Co3Error, LocalNormalizers, RadicalInstance, SylowModel};
use crate::perm::Permutation;
use crate::report::{Recorder, Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Calibrate,
    Sylow,
    Prop43,
    Table1,
    Table2,
    Axioms,
    DeltaFixed,
    Euler,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Calibrate,
        Suite::Sylow,
        Suite::Prop43,
        Suite::Table1,
        Suite::Table2,
        Suite::Axioms,
        Suite::DeltaFixed,
        Suite::Euler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Calibrate => "calibrate",
            Suite::Sylow => "sylow",
            Suite::Prop43 => "prop43",
            Suite::Table1 => "table1",
            Suite::Table2 => "table2",
            Suite::Axioms => "axioms",
            Suite::DeltaFixed => "delta-fixed",
            Suite::Euler => "euler",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s}"))
    }
}

/// Parses a suite name, with `all` standing for every suite.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>, String> {
    if name == "all" {
        Ok(Suite::ALL.to_vec())
    } else {
        name.parse().map(|s| vec![s])
    }
}

/// Lazily built stages shared between suites.
pub struct Co3Pipeline {
    pub ctx: Co3Context,
    /// Random 2B samples for the product rule; 0 disables the sampled check.
    pub two_b_samples: usize,
    model: Option<SylowModel>,
    instances: Option<Vec<RadicalInstance>>,
    normalizers: Option<LocalNormalizers>,
    residue: Option<PointResidue>,
    census: Option<InvolutionCensus>,
}

impl Co3Pipeline {
    pub fn new(gens: Vec<Permutation>, config: &Co3Config) -> Result<Self, Co3Error> {
        Ok(Self::from_context(Co3Context::calibrate(gens, config)?))
    }

    pub fn from_context(ctx: Co3Context) -> Self {
        Co3Pipeline {
            ctx,
            two_b_samples: 200,
            model: None,
            instances: None,
            normalizers: None,
            residue: None,
            census: None,
        }
    }

    pub fn model(&mut self) -> Result<&SylowModel, Co3Error> {
        if self.model.is_none() {
            let s = sylow2(&self.ctx)?;
            self.model = Some(SylowModel::build(&self.ctx, s)?);
        }
        Ok(self.model.as_ref().expect("built"))
    }

    pub fn instances(&mut self) -> Result<&[RadicalInstance], Co3Error> {
        if self.instances.is_none() {
            let inst = instantiate(self.model()?)?;
            self.instances = Some(inst);
        }
        Ok(self.instances.as_deref().expect("built"))
    }

    pub fn normalizers(&mut self) -> Result<&LocalNormalizers, Co3Error> {
        if self.normalizers.is_none() {
            self.instances()?;
            let n = local_normalizers(&self.ctx, self.model.as_ref().expect("built"), self.instances.as_ref().expect("built"))?;
            self.normalizers = Some(n);
        }
        Ok(self.normalizers.as_ref().expect("built"))
    }

    pub fn residue(&mut self) -> Result<&PointResidue, Co3Error> {
        if self.residue.is_none() {
            self.residue = Some(PointResidue::build(&self.ctx)?);
        }
        Ok(self.residue.as_ref().expect("built"))
    }

    pub fn census(&mut self) -> Result<&InvolutionCensus, Co3Error> {
        if self.census.is_none() {
            self.census = Some(checks::involution_census(&self.ctx)?);
        }
        Ok(self.census.as_ref().expect("built"))
    }

    /// Everything the local checks need, built on demand.
    pub fn local(&mut self) -> Result<(&Co3Context, &SylowModel, &[RadicalInstance], &LocalNormalizers), Co3Error> {
        self.normalizers()?;
        Ok((
            &self.ctx,
            self.model.as_ref().expect("built"),
            self.instances.as_deref().expect("built"),
            self.normalizers.as_ref().expect("built"),
        ))
    }

    fn ensure(&mut self, suite: Suite) -> Result<(), Co3Error> {
        match suite {
            Suite::Calibrate => drop(self.census()?),
            Suite::Sylow | Suite::Prop43 => drop(self.instances()?),
            Suite::Table1 | Suite::Table2 => {
                self.normalizers()?;
                self.residue()?;
            }
            Suite::Axioms => {
                self.residue()?;
                self.census()?;
            }
            Suite::DeltaFixed => drop(self.residue()?),
            Suite::Euler => drop(self.normalizers()?),
        }
        Ok(())
    }

    /// Runs one suite. Stage construction time is reported as its own entry.
    pub fn run_suite(&mut self, suite: Suite) -> Result<Vec<crate::report::Entry>, Co3Error> {
        let t = Instant::now();
        self.ensure(suite)?;
        let mut setup = Recorder::new();
        setup.record(
            format!("{}.setup", suite.name()),
            "building the shared data for this suite",
            Status::Pass,
            "-",
            "built",
        );
        let mut entries = setup.finish();
        entries[0].runtime_ms = t.elapsed().as_millis() as u64;
        let ctx = &self.ctx;
        let more = match suite {
            Suite::Calibrate => checks::calibrate(ctx, self.census.as_ref().expect("built")),
            Suite::Sylow => checks::sylow(self.model.as_ref().expect("built")),
            Suite::Prop43 => checks::prop43(self.model.as_ref().expect("built"), self.instances.as_ref().expect("built")),
            Suite::Table1 => checks::table1(
                ctx,
                self.model.as_ref().expect("built"),
                self.instances.as_ref().expect("built"),
                self.normalizers.as_ref().expect("built"),
                self.residue.as_ref().expect("built"),
            )?,
            Suite::Table2 => checks::table2(
                ctx,
                self.model.as_ref().expect("built"),
                self.instances.as_ref().expect("built"),
                self.normalizers.as_ref().expect("built"),
                self.residue.as_ref().expect("built"),
            )?,
            Suite::Axioms => checks::axioms(
                ctx,
                self.residue.as_ref().expect("built"),
                self.census.as_ref().expect("built"),
                self.two_b_samples,
            ),
            Suite::DeltaFixed => {
                let fc = FixedComplex::build(ctx, self.residue.as_ref().expect("built"))?;
                checks::delta_fixed(&fc)?
            }
            Suite::Euler => checks::euler(self.normalizers.as_ref().expect("built"))?,
        };
        entries.extend(more);
        Ok(entries)
    }

    /// Runs the suites in order into a fresh report.
    pub fn run(&mut self, suites: &[Suite]) -> Result<Report, Co3Error> {
        let mut report = Report::new(self.ctx.seed);
        report.metadata.suites = suites.iter().map(|s| s.name().to_string()).collect();
        report.metadata.generators_digest = Some(self.ctx.digest.clone());
        for &suite in suites {
            let entries = self.run_suite(suite)?;
            report.extend(entries);
        }
        report.metadata.cache_hits = self.ctx.cache_hits;
        Ok(report)
    }
}
