fn main() {
    std::process::exit(genericity::cli::parse_and_run(std::env::args_os()));
}
