use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};

use senseforge::mssg::ModelKind;
use senseforge::sgns::SigmoidMode;
use senseforge::store::{is_binary, save_embeddings_text};
use senseforge::{
    build_vocab, evaluate_analogies, load, load_model, parse_analogy_file, parse_expression,
    save_binary, save_text, train_mssg, train_skipgram, AnalogyOptions, Error, Include, Result,
    Space, TextFile, Tokenizer, TrainingConfig, Vocabulary,
};

use crate::{
    AlgebraArgs, ConvertArgs, EvalArgs, IncludeArg, Mode, NnArgs, OutputFormat, SpaceArg,
    TrainArgs, VocabArgs,
};

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Global => Space::Global,
            SpaceArg::Sense => Space::Sense,
        }
    }
}

impl From<IncludeArg> for Include {
    fn from(i: IncludeArg) -> Self {
        match i {
            IncludeArg::Global => Include::Global,
            IncludeArg::Senses => Include::Senses,
            IncludeArg::Both => Include::Both,
        }
    }
}

pub(crate) fn vocab(args: &VocabArgs) -> Result<()> {
    let source = TextFile::open(&args.input)?;
    let vocab = build_vocab(
        &source,
        &Tokenizer::new(args.tagged),
        args.min_count,
        args.workers,
    )?;
    log::info!("{} entries, {} tokens", vocab.len(), vocab.total_tokens());
    match &args.output {
        Some(path) => vocab.write_tsv(BufWriter::new(File::create(path)?)),
        None => vocab.write_tsv(BufWriter::new(io::stdout().lock())),
    }
}

pub(crate) fn train(args: &TrainArgs) -> Result<()> {
    let config = TrainingConfig {
        dim: args.dim,
        window: args.window,
        lr0: args.lr,
        min_count: args.min_count,
        negatives: args.negatives,
        epochs: args.epochs,
        subsample_t: args.subsample,
        senses: args.senses,
        sense_min_count: args.sense_min_count,
        seed: args.seed,
        workers: args.workers,
        negative_table_size: args.negative_table_size,
        sigmoid: if args.exact_sigmoid {
            SigmoidMode::Exact
        } else {
            SigmoidMode::Table
        },
    };
    config.validate()?;
    let tokenizer = Tokenizer::new(args.mode == Mode::Sense2vec);
    let source = TextFile::open(&args.input)?;
    let vocab = match &args.vocab {
        Some(path) => {
            let v = Vocabulary::read_tsv(BufReader::new(File::open(path)?))?;
            Vocabulary::from_counts(v.entries().iter().cloned(), config.min_count)
        }
        None => build_vocab(&source, &tokenizer, config.min_count, config.workers)?,
    };
    if vocab.is_empty() {
        return Err(Error::Config(format!(
            "no token occurs at least {} times in {}",
            config.min_count,
            args.input.display()
        )));
    }
    log::info!(
        "vocabulary: {} entries, {} tokens; training {:?} with dim={} window={} workers={}",
        vocab.len(),
        vocab.total_tokens(),
        args.mode,
        config.dim,
        config.window,
        config.workers
    );
    let (model, stats) = match args.mode {
        Mode::Word2vec | Mode::Sense2vec => train_skipgram(&source, &tokenizer, &vocab, &config)?,
        Mode::Mssg => train_mssg(&source, &tokenizer, &vocab, &config)?,
    };
    match args.format {
        OutputFormat::Binary => save_binary(&model, &args.output)?,
        OutputFormat::Text => {
            let include = if model.kind() == ModelKind::Mssg {
                args.include.into()
            } else {
                Include::Global
            };
            save_text(&model, &args.output, include)?;
        }
    }
    println!(
        "tokens={} time={:.2}s tok/s={:.0}",
        stats.tokens,
        stats.seconds,
        stats.tokens_per_sec()
    );
    Ok(())
}

pub(crate) fn eval(args: &EvalArgs) -> Result<()> {
    let emb = load(&args.model)?;
    let dataset = parse_analogy_file(&args.analogies)?;
    let spaces = match args.space {
        Some(s) => vec![s.into()],
        None if emb.kind() == ModelKind::Mssg => vec![Space::Global, Space::Sense],
        None => vec![Space::Global],
    };
    let mut out = io::stdout().lock();
    let mut reports = Vec::new();
    for space in spaces {
        let options = AnalogyOptions {
            space,
            restrict_vocab: args.restrict_vocab,
            oov_as_wrong: args.oov_as_wrong,
        };
        let report = evaluate_analogies(&emb, &dataset, &options);
        writeln!(out, "{report}")?;
        if args.tsv {
            write!(out, "{}", report.tsv())?;
            writeln!(out)?;
        }
        reports.push(report);
    }
    if reports.len() > 1 {
        writeln!(
            out,
            "{:<10} {:>10} {:>10} {:>10}",
            "space", "syntactic", "semantic", "all"
        )?;
        for r in &reports {
            writeln!(
                out,
                "{:<10} {:>9.2}% {:>9.2}% {:>9.2}%",
                r.space.as_str(),
                100.0 * r.syntactic().accuracy(),
                100.0 * r.semantic().accuracy(),
                100.0 * r.all().accuracy()
            )?;
        }
    }
    Ok(())
}

pub(crate) fn nn(args: &NnArgs) -> Result<()> {
    let emb = load(&args.model)?;
    let mut out = io::stdout().lock();
    for label in &args.labels {
        let result = emb.nearest_neighbors(label, args.topn, args.space.into())?;
        writeln!(out, "{label}")?;
        write!(out, "{result}")?;
    }
    Ok(())
}

pub(crate) fn algebra(args: &AlgebraArgs) -> Result<()> {
    let emb = load(&args.model)?;
    let terms = parse_expression(&args.expression.join(" "))?;
    let result = emb.vector_algebra(&terms, args.topn, args.space.into())?;
    if let Some(w) = &result.warning {
        log::warn!("{w}");
    }
    print!("{result}");
    Ok(())
}

pub(crate) fn convert(args: &ConvertArgs) -> Result<()> {
    let rows = if is_binary(&args.input)? {
        let model = load_model(&args.input)?;
        let include = match (model.kind(), args.include) {
            (ModelKind::Mssg, i) => i.into(),
            (_, IncludeArg::Senses) => {
                return Err(Error::Usage(format!(
                    "a {} model has no sense rows",
                    model.kind()
                )))
            }
            _ => Include::Global,
        };
        save_text(&model, &args.output, include)?
    } else {
        save_embeddings_text(&load(&args.input)?, &args.output)?
    };
    log::info!("wrote {rows} rows to {}", args.output.display());
    Ok(())
}
