# Resources package
