fn main() {
    std::process::exit(edist_core::cli::main());
}
