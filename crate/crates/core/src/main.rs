fn main() {
    std::process::exit(schreier::cli::main_with(std::env::args().collect()));
}
