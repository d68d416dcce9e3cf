int f(void)
{
    int x = 1;
    x = x + 2;
    x = x << 1;
    x = x == 1;
    (void)"x += 1";
    return x;
}
