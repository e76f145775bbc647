fn main() { std::process::exit(tropdiv::cli::run(std::env::args())); }
