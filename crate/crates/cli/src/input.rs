//! Graph arguments: inline graph6, `@path`, or `-` for standard input.

use std::io::BufRead;

use turan_core::graph::{parse_graph, GraphFormat};
use turan_core::Graph;

use crate::CliError;

/// Reads graph arguments, handing out standard input at most once.
pub struct GraphReader<'a> {
    stdin: &'a mut dyn BufRead,
    stdin_taken: bool,
}

impl<'a> GraphReader<'a> {
    pub fn new(stdin: &'a mut dyn BufRead) -> Self {
        GraphReader { stdin, stdin_taken: false }
    }

    pub fn graph(&mut self, flag: &str, arg: &str) -> Result<Graph, CliError> {
        let text = if arg == "-" {
            let mut text = String::new();
            self.take_stdin(flag)?
                .read_to_string(&mut text)
                .map_err(|e| CliError::Io(format!("--{flag}: reading standard input: {e}")))?;
            text
        } else if let Some(path) = arg.strip_prefix('@').filter(|p| !p.is_empty()) {
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("--{flag}: {path}: {e}")))?
        } else {
            return parse_graph(arg, GraphFormat::Graph6).map_err(|e| CliError::arg(flag, e));
        };
        parse_graph(text.trim(), detect_format(&text)).map_err(|e| CliError::arg(flag, e))
    }

    /// Standard input as a line stream, for graph6 stream mode.
    pub fn take_stdin(&mut self, what: &str) -> Result<&mut dyn BufRead, CliError> {
        if self.stdin_taken {
            return Err(CliError::Usage(format!("{what}: standard input is already used by another argument")));
        }
        self.stdin_taken = true;
        Ok(&mut *self.stdin)
    }
}

/// Edge lists are recognised by a leading `n=` line or whitespace in the
/// first line; anything else is read as graph6.
pub fn detect_format(text: &str) -> GraphFormat {
    let first = text.trim_start().lines().next().unwrap_or("").trim();
    if first.starts_with("n=") || first.contains(char::is_whitespace) {
        GraphFormat::EdgeList
    } else {
        GraphFormat::Graph6
    }
}

/// Comma-separated vertex list; the empty string is the empty set.
pub fn vertex_list(flag: &str, arg: &str) -> Result<Vec<usize>, CliError> {
    arg.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| CliError::Usage(format!("--{flag}: bad vertex index {s:?}"))))
        .collect()
}
