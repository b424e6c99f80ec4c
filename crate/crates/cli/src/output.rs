use std::fmt::{Display, Write};

use crate::{AlgebraOp, Cli, Command, Format};

/// Line-oriented report text: `key=value` in structured mode, `key: value`
/// for humans.
pub struct Out {
    format: Format,
    text: String,
}

impl Out {
    pub fn new(format: Format) -> Out {
        Out {
            format,
            text: String::new(),
        }
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        let _ = match self.format {
            Format::Structured => writeln!(self.text, "{key}={value}"),
            Format::Human => writeln!(self.text, "{key}: {value}"),
        };
    }

    /// Re-emits a report whose `Display` is already `key=value` lines.
    pub fn block(&mut self, report: impl Display) {
        for line in report.to_string().lines() {
            match line.split_once('=') {
                Some((k, v)) => self.kv(k, v),
                None => self.line(line),
            }
        }
    }

    /// A bare result: the value alone for humans.
    pub fn result(&mut self, value: impl Display) {
        match self.format {
            Format::Structured => self.kv("result", value),
            Format::Human => self.line(value),
        }
    }

    pub fn line(&mut self, text: impl Display) {
        let _ = writeln!(self.text, "{text}");
    }

    pub fn human(&mut self, text: impl Display) {
        if self.format == Format::Human {
            self.line(text);
        }
    }

    pub fn finish(self) -> String {
        self.text
    }
}

fn describe(command: &Command) -> (&'static str, Vec<String>) {
    match command {
        Command::Check { model } => ("check", vec![model.display().to_string()]),
        Command::Algebra { op } => match op {
            AlgebraOp::Delta { expr } => ("algebra delta", vec![expr.clone()]),
            AlgebraOp::Bracket { f, g } => ("algebra bracket", vec![f.clone(), g.clone()]),
            AlgebraOp::Degree { expr } => ("algebra degree", vec![expr.clone()]),
            AlgebraOp::Restrict { expr, psi } => {
                ("algebra restrict", vec![expr.clone(), format!("psi={psi}")])
            }
        },
        Command::Integrate {
            fixture,
            surface,
            stokes,
            homology,
            sweep,
        } => {
            let mut inputs = vec![fixture.display().to_string()];
            inputs.extend(surface.iter().map(|s| format!("surface={s}")));
            if *stokes {
                inputs.push("stokes".into());
            }
            if let Some(h) = homology {
                inputs.push(format!("homology={}", h.join(",")));
            }
            if *sweep {
                inputs.push("sweep".into());
            }
            ("integrate", inputs)
        }
        Command::Selftest { inject_sign_bug } => (
            "selftest",
            if *inject_sign_bug {
                vec!["inject-sign-bug".into()]
            } else {
                Vec::new()
            },
        ),
    }
}

/// The run configuration, enough to replay the run.
pub fn header(cli: &Cli) -> String {
    let (name, inputs) = describe(&cli.command);
    let trials = cli
        .trials
        .map_or_else(|| "default".to_string(), |t| t.to_string());
    let fields = [
        ("command", name.to_string()),
        ("inputs", inputs.join(" ")),
        ("seed", cli.seed.to_string()),
        ("trials", trials),
        ("order", cli.order.to_string()),
        ("points", cli.points.to_string()),
        ("subdivisions", cli.subdivisions.to_string()),
    ];
    match cli.format {
        Format::Structured => {
            let mut s = String::new();
            for (k, v) in fields {
                let _ = writeln!(s, "config.{k}={v}");
            }
            s
        }
        Format::Human => {
            let rest: Vec<String> = fields[1..]
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            format!("# bvcalc {name} {}\n", rest.join(" "))
        }
    }
}
