fn main() {
    std::process::exit(wigner_lab::cli::main_from_env());
}
