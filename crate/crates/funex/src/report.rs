use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionStatus {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionReport {
    pub name: &'static str,
    pub status: SectionStatus,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Warning {
    pub section: &'static str,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.section, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub out_dir: PathBuf,
    /// In section-name order.
    pub sections: Vec<SectionReport>,
    /// Every written file once, sorted.
    pub manifest: Vec<PathBuf>,
    pub warnings: Vec<Warning>,
    pub duration: Duration,
}

impl RunReport {
    pub fn success(&self) -> bool {
        self.sections.iter().all(|s| s.status == SectionStatus::Ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &str)> {
        self.sections.iter().filter_map(|s| match &s.status {
            SectionStatus::Failed(msg) => Some((s.name, msg.as_str())),
            SectionStatus::Ok => None,
        })
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {} -> {}", self.scenario, self.out_dir.display())?;
        for s in &self.sections {
            match &s.status {
                SectionStatus::Ok => writeln!(f, "  {:<10} ok ({} files)", s.name, s.files.len())?,
                SectionStatus::Failed(msg) => writeln!(f, "  {:<10} FAILED: {msg}", s.name)?,
            }
        }
        for w in &self.warnings {
            writeln!(f, "  warning {w}")?;
        }
        for p in &self.manifest {
            writeln!(f, "  wrote {}", p.display())?;
        }
        write!(f, "  finished in {:?}", self.duration)
    }
}
