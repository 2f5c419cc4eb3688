fn main() {
    std::process::exit(ortho_spin::cli::main_with_args(std::env::args_os()));
}
