fn main() {
    std::process::exit(magnon_memory::cli::main_with_args(std::env::args_os()));
}
