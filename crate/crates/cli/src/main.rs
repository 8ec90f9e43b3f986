fn main() { std::process::exit(degseq_cli::run(std::env::args().collect())); }
