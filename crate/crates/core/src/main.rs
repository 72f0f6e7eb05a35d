fn main() {
    std::process::exit(partition_base::cli::run());
}
