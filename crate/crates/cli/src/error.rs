use boolperc::PercError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Perc(#[from] PercError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for budget and window errors, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Perc(e) if e.is_resource() => 2,
            _ => 1,
        }
    }
}
