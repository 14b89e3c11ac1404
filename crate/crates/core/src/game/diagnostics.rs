use std::fmt;

/// One validation problem, with a JSON-pointer-like path to the entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

pub(crate) fn into_result(diags: Vec<Diagnostic>) -> crate::Result<()> {
    if diags.is_empty() {
        Ok(())
    } else {
        Err(crate::Error::Invalid(diags))
    }
}
