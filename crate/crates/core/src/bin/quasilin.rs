fn main() {
    std::process::exit(quasilin::cli::main());
}
